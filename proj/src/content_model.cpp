#include "mlabel/content_model.hpp"

#include <memory>

namespace mlabel {

std::string_view to_string(ContentKind kind) {
  switch (kind) {
    case ContentKind::NaiveBayes: return "nb";
    case ContentKind::KNN: return "knn";
    case ContentKind::SVM: return "svm";
    case ContentKind::LogReg: return "logreg";
  }
  return "nb";
}

ContentKind parse_content_kind(std::string_view text) {
  if (text == "nb") return ContentKind::NaiveBayes;
  if (text == "knn") return ContentKind::KNN;
  if (text == "svm") return ContentKind::SVM;
  if (text == "logreg") return ContentKind::LogReg;
  throw ConfigError("unknown content classifier '" + std::string(text) +
                    "' (expected nb, knn, svm or logreg)");
}

double predict_proba(const ContentModel& model, const SparseDocument& doc) {
  return std::visit([&doc](const auto& m) { return predict_proba(m, doc); }, model);
}

std::vector<ContentModel> train_content_models(const Dataset& train,
                                               const ContentOptions& options) {
  if (train.n_docs() == 0) throw DataError("cannot train on an empty dataset");
  const Index p = train.n_categories();
  std::vector<ContentModel> models;
  models.reserve(static_cast<std::size_t>(p));

  switch (options.kind) {
    case ContentKind::NaiveBayes:
      for (Index j = 0; j < p; ++j) models.emplace_back(train_nb(train, j, options.nb));
      break;
    case ContentKind::KNN: {
      auto index = std::make_shared<const KNNIndex>(train, options.knn_k, options.knn_weighted);
      for (Index j = 0; j < p; ++j) models.emplace_back(KNNModel{index, j});
      break;
    }
    case ContentKind::SVM: {
      const SparseDesign x = design_matrix(train);
      SvmOptions svm;
      svm.C = options.C;
      for (Index j = 0; j < p; ++j) {
        models.emplace_back(train_svm_platt(x, category_targets(train, j), svm, options.platt_folds));
      }
      break;
    }
    case ContentKind::LogReg: {
      const SparseDesign x = design_matrix(train);
      LogRegOptions lr;
      lr.lambda = options.lambda;
      for (Index j = 0; j < p; ++j) models.emplace_back(train_logreg(x, category_targets(train, j), lr));
      break;
    }
  }
  return models;
}

ScoreMatrix predict_content_scores(std::span<const ContentModel> models, const Dataset& ds) {
  const Index p = static_cast<Index>(models.size());
  if (p != ds.n_categories()) {
    throw DataError("model has " + std::to_string(p) + " categories, dataset has " +
                    std::to_string(ds.n_categories()));
  }
  const KNNIndex* shared = nullptr;
  if (p > 0 && std::holds_alternative<KNNModel>(models.front())) {
    shared = std::get<KNNModel>(models.front()).index.get();
    for (Index j = 0; j < p; ++j) {
      const auto* knn = std::get_if<KNNModel>(&models[static_cast<std::size_t>(j)]);
      if (knn == nullptr || knn->index.get() != shared || knn->category != j) {
        shared = nullptr;
        break;
      }
    }
  }

  Eigen::MatrixXd scores(ds.n_docs(), p);
  for (Index i = 0; i < ds.n_docs(); ++i) {
    const SparseDocument& doc = ds.document(i);
    if (shared != nullptr) {
      scores.row(i) = shared->predict_all(doc).transpose();
    } else {
      for (Index j = 0; j < p; ++j) scores(i, j) = predict_proba(models[static_cast<std::size_t>(j)], doc);
    }
  }
  return ScoreMatrix(std::move(scores));
}

}  // namespace mlabel
