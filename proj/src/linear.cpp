#include "mlabel/linear.hpp"

namespace mlabel {

double LinearModel::probability(double score) const {
  if (calibration) return sigmoid(-(calibration->a * score + calibration->b));
  return sigmoid(score);
}

double decision_value(const LinearModel& model, const SparseDocument& doc) {
  if (doc.term_extent() > model.dim()) {
    throw DataError("document term index exceeds the model dimension of " +
                    std::to_string(model.dim()));
  }
  double s = model.bias;
  for (const Feature& f : doc.features()) s += model.weights(f.term) * f.value;
  return s;
}

double decision_value(const LinearModel& model, const Eigen::Ref<const Eigen::VectorXd>& x) {
  if (x.size() != model.dim()) {
    throw DataError("input has dimension " + std::to_string(x.size()) + ", model expects " +
                    std::to_string(model.dim()));
  }
  return model.weights.dot(x) + model.bias;
}

double predict_proba(const LinearModel& model, const SparseDocument& doc) {
  return model.probability(decision_value(model, doc));
}

double predict_proba(const LinearModel& model, const Eigen::Ref<const Eigen::VectorXd>& x) {
  return model.probability(decision_value(model, x));
}

SparseDesign design_matrix(const Dataset& ds) {
  std::vector<Eigen::Triplet<double>> triplets;
  for (Index i = 0; i < ds.n_docs(); ++i) {
    for (const Feature& f : ds.document(i).features()) triplets.emplace_back(i, f.term, f.value);
  }
  SparseDesign x(ds.n_docs(), ds.n_terms());
  x.setFromTriplets(triplets.begin(), triplets.end());
  x.makeCompressed();
  return x;
}

Eigen::VectorXd category_targets(const Dataset& ds, Index category) {
  Eigen::VectorXd y(ds.n_docs());
  for (Index i = 0; i < ds.n_docs(); ++i) y(i) = ds.document(i).has_label(category) ? 1.0 : 0.0;
  return y;
}

namespace detail {

SparseDesign select_rows(const SparseDesign& x, const std::vector<Index>& rows) {
  std::vector<Eigen::Triplet<double>> triplets;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (SparseDesign::InnerIterator it(x, rows[r]); it; ++it) {
      triplets.emplace_back(static_cast<Index>(r), it.col(), it.value());
    }
  }
  SparseDesign out(static_cast<Index>(rows.size()), x.cols());
  out.setFromTriplets(triplets.begin(), triplets.end());
  return out;
}

}  // namespace detail

PlattTargets platt_targets(Index n_pos, Index n_neg) {
  return {(static_cast<double>(n_pos) + 1.0) / (static_cast<double>(n_pos) + 2.0),
          1.0 / (static_cast<double>(n_neg) + 2.0)};
}

PlattCalibration fit_platt(std::span<const double> scores, std::span<const double> targets,
                           double gradient_tolerance) {
  if (scores.size() != targets.size()) throw DataError("score and target counts differ");
  if (scores.empty()) throw DataError("Platt calibration requires at least one example");
  Index n_pos = 0;
  for (double t : targets) n_pos += t > 0.5 ? 1 : 0;
  const Index n_neg = static_cast<Index>(targets.size()) - n_pos;
  const PlattTargets smoothed = platt_targets(n_pos, n_neg);
  const std::size_t n = scores.size();
  std::vector<double> t(n);
  for (std::size_t i = 0; i < n; ++i) t[i] = targets[i] > 0.5 ? smoothed.positive : smoothed.negative;

  const bool constant = std::all_of(scores.begin(), scores.end(),
                                    [&](double s) { return s == scores.front(); });
  if (constant) {
    double mean = 0.0;
    for (double v : t) mean += v;
    mean /= static_cast<double>(n);
    return {0.0, std::log((1.0 - mean) / mean)};
  }

  // Negative log-likelihood with p_i = 1/(1+exp(f_i)), f_i = a s_i + b.
  const auto objective = [&](double a, double b) {
    double f = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double fab = a * scores[i] + b;
      f += fab >= 0.0 ? t[i] * fab + std::log1p(std::exp(-fab))
                      : (t[i] - 1.0) * fab + std::log1p(std::exp(fab));
    }
    return f;
  };

  constexpr double ridge = 1e-12;
  double a = 0.0;
  double b = std::log((static_cast<double>(n_neg) + 1.0) / (static_cast<double>(n_pos) + 1.0));
  double fval = objective(a, b);
  for (int iter = 0; iter < 100; ++iter) {
    double h11 = ridge, h22 = ridge, h21 = 0.0, g1 = 0.0, g2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double fab = a * scores[i] + b;
      double p, q;
      if (fab >= 0.0) {
        p = std::exp(-fab) / (1.0 + std::exp(-fab));
        q = 1.0 / (1.0 + std::exp(-fab));
      } else {
        p = 1.0 / (1.0 + std::exp(fab));
        q = std::exp(fab) / (1.0 + std::exp(fab));
      }
      const double d2 = p * q;
      h11 += scores[i] * scores[i] * d2;
      h22 += d2;
      h21 += scores[i] * d2;
      const double d1 = t[i] - p;
      g1 += scores[i] * d1;
      g2 += d1;
    }
    if (std::abs(g1) < gradient_tolerance && std::abs(g2) < gradient_tolerance) break;

    const double det = h11 * h22 - h21 * h21;
    const double da = -(h22 * g1 - h21 * g2) / det;
    const double db = -(-h21 * g1 + h11 * g2) / det;
    const double gd = g1 * da + g2 * db;
    double step = 1.0;
    bool moved = false;
    while (step >= 1e-10) {
      const double na = a + step * da;
      const double nb = b + step * db;
      const double nf = objective(na, nb);
      if (nf < fval + 1e-4 * step * gd) {
        a = na;
        b = nb;
        fval = nf;
        moved = true;
        break;
      }
      step *= 0.5;
    }
    if (!moved) break;
  }
  return {a, b};
}

}  // namespace mlabel
