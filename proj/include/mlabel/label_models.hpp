#pragma once

#include "mlabel/linear.hpp"

#include <string_view>

namespace mlabel {

/// Label-only training problem for one category: the other p-1 true label
/// bits as inputs, membership in the category as target.
struct LabelTrainingSet {
  Index excluded_category = 0;
  Eigen::MatrixXd inputs;   // n x (p-1), column k is category k (k < j) or k+1
  Eigen::VectorXd targets;  // 0/1
};

LabelTrainingSet build_label_dataset(const Dataset& ds, Index category);

enum class LabelKind { LogReg, LinearSvmPlatt };

std::string_view to_string(LabelKind kind);
LabelKind parse_label_kind(std::string_view text);

struct LabelOptions {
  LabelKind kind = LabelKind::LogReg;
  double lambda = 1.0;
  double C = 1.0;
  int platt_folds = 0;
};

/// Estimates p_j(c_j | l_j). Trained on binary labels; accepts continuous
/// contexts in [0,1]^(p-1) at prediction time.
using LabelModel = LinearModel;

LabelModel train_label_classifier(const LabelTrainingSet& lts, const LabelOptions& options);

double label_posterior(const LabelModel& model, const LabelContext& context);

}  // namespace mlabel
