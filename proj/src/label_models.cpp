#include "mlabel/label_models.hpp"

namespace mlabel {

LabelTrainingSet build_label_dataset(const Dataset& ds, Index category) {
  const Index p = ds.n_categories();
  if (category < 0 || category >= p) {
    throw DataError("category " + std::to_string(category) + " out of range");
  }
  const Eigen::MatrixXd labels = ds.label_matrix();
  LabelTrainingSet lts;
  lts.excluded_category = category;
  lts.targets = labels.col(category);
  lts.inputs.resize(ds.n_docs(), p - 1);
  lts.inputs.leftCols(category) = labels.leftCols(category);
  lts.inputs.rightCols(p - 1 - category) = labels.rightCols(p - 1 - category);
  return lts;
}

std::string_view to_string(LabelKind kind) {
  return kind == LabelKind::LogReg ? "logreg" : "svm";
}

LabelKind parse_label_kind(std::string_view text) {
  if (text == "logreg") return LabelKind::LogReg;
  if (text == "svm") return LabelKind::LinearSvmPlatt;
  throw ConfigError("unknown label classifier '" + std::string(text) +
                    "' (expected logreg or svm)");
}

LabelModel train_label_classifier(const LabelTrainingSet& lts, const LabelOptions& options) {
  if (lts.inputs.rows() != lts.targets.size()) {
    throw DataError("label training set has mismatched inputs and targets");
  }
  if (options.kind == LabelKind::LogReg) {
    LogRegOptions lr;
    lr.lambda = options.lambda;
    return train_logreg(lts.inputs, lts.targets, lr);
  }
  SvmOptions svm;
  svm.C = options.C;
  return train_svm_platt(lts.inputs, lts.targets, svm, options.platt_folds);
}

double label_posterior(const LabelModel& model, const LabelContext& context) {
  return predict_proba(model, context.values());
}

}  // namespace mlabel
