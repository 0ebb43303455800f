#pragma once

#include "mlabel/knn.hpp"
#include "mlabel/linear.hpp"
#include "mlabel/naive_bayes.hpp"

#include <span>
#include <string_view>
#include <variant>

namespace mlabel {

enum class ContentKind { NaiveBayes, KNN, SVM, LogReg };

std::string_view to_string(ContentKind kind);
ContentKind parse_content_kind(std::string_view text);

struct ContentOptions {
  ContentKind kind = ContentKind::NaiveBayes;
  NBOptions nb;
  Index knn_k = 30;
  bool knn_weighted = true;
  double lambda = 1.0;
  double C = 1.0;
  /// Platt calibration folds for the SVM; < 2 fits on training scores.
  int platt_folds = 0;
};

/// One per-category content classifier producing p_j(c_j | x).
using ContentModel = std::variant<NBModel, KNNModel, LinearModel>;

double predict_proba(const ContentModel& model, const SparseDocument& doc);

/// Trains the p one-vs-rest content classifiers on an already weighted
/// corpus. k-NN models share one index.
std::vector<ContentModel> train_content_models(const Dataset& train,
                                               const ContentOptions& options);

/// n x p matrix of content posteriors. Neighbour retrieval is done once per
/// document when the models share a k-NN index.
ScoreMatrix predict_content_scores(std::span<const ContentModel> models, const Dataset& ds);

}  // namespace mlabel
