#pragma once

#include "mlabel/core.hpp"

namespace mlabel {

struct NBOptions {
  double alpha = 1.0;
  /// Replace every positive count by 1 before training and prediction.
  bool binarize_counts = false;
};

/// Binary multinomial naive Bayes for one category against its complement.
/// Counts may be fractional.
struct NBModel {
  double log_prior_pos = 0.0;
  double log_prior_neg = 0.0;
  Eigen::VectorXd log_likelihood_pos;
  Eigen::VectorXd log_likelihood_neg;
  double alpha = 1.0;
  bool binarize_counts = false;

  Index n_terms() const { return log_likelihood_pos.size(); }
};

/// P(t|c) = (count(t,c) + alpha) / (total(c) + alpha m), same for the
/// complement; priors (n_c + 1) / (n + 2).
NBModel train_nb(const Dataset& ds, Index category, const NBOptions& options = {});

/// Posterior of the positive class via log-sum-exp over the two classes.
double predict_proba(const NBModel& model, const SparseDocument& doc);

}  // namespace mlabel
