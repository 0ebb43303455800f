#pragma once

#include "mlabel/content_model.hpp"
#include "mlabel/label_models.hpp"
#include "mlabel/preprocess.hpp"

#include <algorithm>
#include <span>

namespace mlabel {

inline constexpr double kDecisionThreshold = 0.5;

struct CombinerConfig {
  Mode mode = Mode::M2;
  double epsilon_clamp = 1e-6;
  /// Fall back to the top-scored label when thresholding selects nothing.
  bool force_nonempty = false;

  void validate() const;
};

/// prior_j = (n_j + 1) / (n + 2), clamped to [eps, 1 - eps].
Eigen::VectorXd estimate_priors(const Dataset& ds, double epsilon_clamp = 1e-6);

/// Thresholded context: 1 where the other category scores >= 0.5, else 0.
LabelContext context_m1(const Eigen::Ref<const Eigen::VectorXd>& scores_row, Index category);
/// Continuous context: the other categories' scores as they are.
LabelContext context_m2(const Eigen::Ref<const Eigen::VectorXd>& scores_row, Index category);
LabelContext make_context(Mode mode, const Eigen::Ref<const Eigen::VectorXd>& scores_row,
                          Index category);

/// Fuses the content posterior p(c|x) and the label posterior p(c|l) of one
/// category under conditional independence of content and labels given c:
///
///   p(c|x,l) = (p_cx p_cl / prior) / (p_cx p_cl / prior + (1-p_cx)(1-p_cl)/(1-prior))
///
/// All three inputs are clamped into [eps, 1 - eps] first, so the result is
/// finite and strictly inside (0,1).
template <typename Scalar>
Scalar combine_posterior(Scalar p_cx, Scalar p_cl, Scalar prior, Scalar eps = Scalar(1e-6)) {
  const auto clamp = [eps](Scalar v) { return std::clamp(v, eps, Scalar(1) - eps); };
  p_cx = clamp(p_cx);
  p_cl = clamp(p_cl);
  prior = clamp(prior);
  const Scalar pos = p_cx * p_cl / prior;
  const Scalar neg = (Scalar(1) - p_cx) * (Scalar(1) - p_cl) / (Scalar(1) - prior);
  return pos / (pos + neg);
}

/// Priors, content classifiers, label classifiers, and the fitted feature
/// pipeline that maps raw documents into the content classifiers' space.
struct TrainedModel {
  FeaturePipeline pipeline;
  ContentKind content_kind = ContentKind::NaiveBayes;
  LabelKind label_kind = LabelKind::LogReg;
  Eigen::VectorXd priors;
  std::vector<ContentModel> content_models;
  std::vector<LabelModel> label_models;
  Mode mode = Mode::M2;
  double epsilon_clamp = 1e-6;

  Index n_categories() const { return priors.size(); }
  /// Throws DataError when the parts disagree on p or priors are unclamped.
  void validate() const;
};

struct Prediction {
  ScoreMatrix base;
  ScoreMatrix final_scores;
};

/// Step 2 of the prediction algorithm over a whole score matrix: for every
/// document and category, build the context from the base row, query the
/// label classifier and fuse. Baseline mode returns `base` unchanged.
ScoreMatrix fuse_scores(const ScoreMatrix& base, const Eigen::VectorXd& priors,
                        std::span<const LabelModel> label_models, Mode mode,
                        double epsilon_clamp);

/// Runs the full algorithm on a corpus in the model's raw term space. Base
/// scores are the content posteriors clamped into [eps, 1 - eps].
Prediction predict_all(const TrainedModel& model, const Dataset& ds);
Prediction predict_all(const TrainedModel& model, const Dataset& ds, Mode mode);

/// Label sets by thresholding at 0.5 (inclusive).
std::vector<LabelSet> binarize(const ScoreMatrix& scores, const CombinerConfig& config);

}  // namespace mlabel
