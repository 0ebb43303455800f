#include "mlabel/training.hpp"

namespace mlabel {

Weighting default_weighting(ContentKind kind) {
  return kind == ContentKind::NaiveBayes ? Weighting::Tf : Weighting::TfIdf;
}

TrainedModel train_model(const Dataset& train, const TrainConfig& config) {
  CombinerConfig{config.mode, config.epsilon_clamp, false}.validate();
  if (train.n_docs() == 0) throw DataError("training corpus is empty");
  train.require_nonempty_labels();

  TrainedModel model;
  model.mode = config.mode;
  model.epsilon_clamp = config.epsilon_clamp;
  model.content_kind = config.content.kind;
  model.label_kind = config.label.kind;
  model.priors = estimate_priors(train, config.epsilon_clamp);

  auto [pipeline, weighted] = fit_pipeline(train, config.preprocess);
  model.pipeline = std::move(pipeline);
  model.content_models = train_content_models(weighted, config.content);

  const Index p = train.n_categories();
  model.label_models.reserve(static_cast<std::size_t>(p));
  for (Index j = 0; j < p; ++j) {
    model.label_models.push_back(train_label_classifier(build_label_dataset(train, j), config.label));
  }
  model.validate();
  return model;
}

}  // namespace mlabel
