#include "mlabel/combiner.hpp"

namespace mlabel {

void CombinerConfig::validate() const {
  if (!(epsilon_clamp > 0.0 && epsilon_clamp < kDecisionThreshold)) {
    throw ConfigError("epsilon_clamp must lie in (0, 0.5)");
  }
}

Eigen::VectorXd estimate_priors(const Dataset& ds, double epsilon_clamp) {
  if (ds.n_docs() == 0) throw DataError("cannot estimate priors from an empty dataset");
  const double n = static_cast<double>(ds.n_docs());
  Eigen::VectorXd counts = Eigen::VectorXd::Zero(ds.n_categories());
  for (const auto& doc : ds.documents()) {
    for (Index j : doc.labels()) counts(j) += 1.0;
  }
  return ((counts.array() + 1.0) / (n + 2.0))
      .max(epsilon_clamp)
      .min(1.0 - epsilon_clamp)
      .matrix();
}

LabelContext context_m1(const Eigen::Ref<const Eigen::VectorXd>& scores_row, Index category) {
  const Eigen::VectorXd hard =
      (scores_row.array() >= kDecisionThreshold).select(Eigen::VectorXd::Ones(scores_row.size()), 0.0);
  return LabelContext::from_full(hard, category);
}

LabelContext context_m2(const Eigen::Ref<const Eigen::VectorXd>& scores_row, Index category) {
  return LabelContext::from_full(scores_row, category);
}

LabelContext make_context(Mode mode, const Eigen::Ref<const Eigen::VectorXd>& scores_row,
                          Index category) {
  return mode == Mode::M1 ? context_m1(scores_row, category) : context_m2(scores_row, category);
}

void TrainedModel::validate() const {
  const Index p = n_categories();
  if (p < 1) throw DataError("model has no categories");
  if (static_cast<Index>(content_models.size()) != p || static_cast<Index>(label_models.size()) != p) {
    throw DataError("model parts disagree on the number of categories");
  }
  for (Index j = 0; j < p; ++j) {
    if (!(priors(j) >= epsilon_clamp && priors(j) <= 1.0 - epsilon_clamp)) {
      throw DataError("prior " + std::to_string(j) + " is not clamped away from 0 and 1");
    }
    if (label_models[static_cast<std::size_t>(j)].dim() != p - 1) {
      throw DataError("label model " + std::to_string(j) + " has the wrong input dimension");
    }
  }
}

ScoreMatrix fuse_scores(const ScoreMatrix& base, const Eigen::VectorXd& priors,
                        std::span<const LabelModel> label_models, Mode mode,
                        double epsilon_clamp) {
  const Index p = base.cols();
  if (priors.size() != p || static_cast<Index>(label_models.size()) != p) {
    throw DataError("score matrix has " + std::to_string(p) +
                    " categories but the model has " + std::to_string(priors.size()));
  }
  if (mode == Mode::Baseline) return base;

  Eigen::MatrixXd fused(base.rows(), p);
  for (Index i = 0; i < base.rows(); ++i) {
    const Eigen::VectorXd row = base.row(i).transpose();
    for (Index j = 0; j < p; ++j) {
      const LabelContext ctx = make_context(mode, row, j);
      const double p_cl = label_posterior(label_models[static_cast<std::size_t>(j)], ctx);
      fused(i, j) = combine_posterior(row(j), p_cl, priors(j), epsilon_clamp);
    }
  }
  return ScoreMatrix(std::move(fused));
}

Prediction predict_all(const TrainedModel& model, const Dataset& ds) {
  return predict_all(model, ds, model.mode);
}

Prediction predict_all(const TrainedModel& model, const Dataset& ds, Mode mode) {
  model.validate();
  if (ds.n_categories() != model.n_categories()) {
    throw DataError("dataset has " + std::to_string(ds.n_categories()) +
                    " categories, model has " + std::to_string(model.n_categories()));
  }
  const Dataset weighted = model.pipeline.apply(ds);
  const ScoreMatrix content = predict_content_scores(model.content_models, weighted);
  const double eps = model.epsilon_clamp;
  ScoreMatrix base(content.matrix().array().max(eps).min(1.0 - eps).matrix());
  ScoreMatrix fused = fuse_scores(base, model.priors, model.label_models, mode, eps);
  return {std::move(base), std::move(fused)};
}

std::vector<LabelSet> binarize(const ScoreMatrix& scores, const CombinerConfig& config) {
  std::vector<LabelSet> out(static_cast<std::size_t>(scores.rows()));
  for (Index i = 0; i < scores.rows(); ++i) {
    LabelSet& labels = out[static_cast<std::size_t>(i)];
    for (Index j = 0; j < scores.cols(); ++j) {
      if (scores(i, j) >= kDecisionThreshold) labels.push_back(j);
    }
    if (labels.empty() && config.force_nonempty && scores.cols() > 0) {
      Index best = 0;
      for (Index j = 1; j < scores.cols(); ++j) {
        if (scores(i, j) > scores(i, best)) best = j;
      }
      labels.push_back(best);
    }
  }
  return out;
}

}  // namespace mlabel
