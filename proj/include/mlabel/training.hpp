#pragma once

#include "mlabel/combiner.hpp"

namespace mlabel {

struct TrainConfig {
  PreprocessOptions preprocess;
  ContentOptions content;
  LabelOptions label;
  Mode mode = Mode::M2;
  double epsilon_clamp = 1e-6;
};

/// Default term weighting for a content classifier: raw counts for naive
/// Bayes, tf-idf for the vector-space classifiers.
Weighting default_weighting(ContentKind kind);

/// Fits the feature pipeline, the p content classifiers, the p label
/// classifiers and the priors on a training corpus whose every document
/// carries at least one label.
TrainedModel train_model(const Dataset& train, const TrainConfig& config);

}  // namespace mlabel
