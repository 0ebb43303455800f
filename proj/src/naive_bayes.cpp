#include "mlabel/naive_bayes.hpp"

#include <algorithm>
#include <cmath>

namespace mlabel {

NBModel train_nb(const Dataset& ds, Index category, const NBOptions& options) {
  if (!(options.alpha > 0.0) || !std::isfinite(options.alpha)) {
    throw ConfigError("naive Bayes alpha must be positive and finite");
  }
  if (ds.n_docs() == 0) throw DataError("cannot train naive Bayes on an empty dataset");
  if (category < 0 || category >= ds.n_categories()) throw DataError("category out of range");

  const Index m = ds.n_terms();
  Eigen::VectorXd count_pos = Eigen::VectorXd::Zero(m);
  Eigen::VectorXd count_neg = Eigen::VectorXd::Zero(m);
  double n_pos = 0.0;
  for (const auto& doc : ds.documents()) {
    const bool pos = doc.has_label(category);
    n_pos += pos ? 1.0 : 0.0;
    Eigen::VectorXd& counts = pos ? count_pos : count_neg;
    for (const Feature& f : doc.features()) {
      counts(f.term) += options.binarize_counts ? (f.value > 0.0 ? 1.0 : 0.0) : f.value;
    }
  }
  const double n = static_cast<double>(ds.n_docs());
  const double a = options.alpha;
  const double md = static_cast<double>(m);

  NBModel model;
  model.alpha = a;
  model.binarize_counts = options.binarize_counts;
  model.log_prior_pos = std::log((n_pos + 1.0) / (n + 2.0));
  model.log_prior_neg = std::log((n - n_pos + 1.0) / (n + 2.0));
  model.log_likelihood_pos =
      ((count_pos.array() + a) / (count_pos.sum() + a * md)).log().matrix();
  model.log_likelihood_neg =
      ((count_neg.array() + a) / (count_neg.sum() + a * md)).log().matrix();
  return model;
}

double predict_proba(const NBModel& model, const SparseDocument& doc) {
  if (doc.term_extent() > model.n_terms()) {
    throw DataError("document term index exceeds the model vocabulary of " +
                    std::to_string(model.n_terms()));
  }
  double pos = model.log_prior_pos;
  double neg = model.log_prior_neg;
  for (const Feature& f : doc.features()) {
    const double x = model.binarize_counts ? (f.value > 0.0 ? 1.0 : 0.0) : f.value;
    pos += x * model.log_likelihood_pos(f.term);
    neg += x * model.log_likelihood_neg(f.term);
  }
  // p = exp(pos) / (exp(pos) + exp(neg))
  const double hi = std::max(pos, neg);
  const double log_norm = hi + std::log(std::exp(pos - hi) + std::exp(neg - hi));
  return std::clamp(std::exp(pos - log_norm), 0.0, 1.0);
}

}  // namespace mlabel
