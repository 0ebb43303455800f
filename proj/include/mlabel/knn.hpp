#pragma once

#include "mlabel/core.hpp"

#include <Eigen/SparseCore>

#include <memory>
#include <span>

namespace mlabel {

struct Neighbor {
  Index index = 0;
  double similarity = 0.0;
};

/// Similarity-weighted (or plain) vote: the share of neighbour weight that
/// falls in the category. Falls back to `fallback` when the total is 0.
double knn_vote(std::span<const Neighbor> neighbors, std::span<const char> in_category,
                bool weighted, double fallback);

/// Training documents stored as L2-normalized rows for cosine retrieval,
/// shared by the per-category k-NN models.
class KNNIndex {
 public:
  KNNIndex(const Dataset& train, Index k, bool weighted = true);

  Index k() const { return k_; }
  bool weighted() const { return weighted_; }
  Index n_terms() const { return vectors_.cols(); }
  Index n_categories() const { return static_cast<Index>(members_.size()); }
  Index n_train() const { return vectors_.rows(); }

  /// The k most similar training documents, most similar first; ties go to
  /// the lower training index.
  std::vector<Neighbor> neighbors(const SparseDocument& doc) const;
  double predict(std::span<const Neighbor> neighbors, Index category) const;
  Eigen::VectorXd predict_all(const SparseDocument& doc) const;

  const Eigen::SparseMatrix<double, Eigen::RowMajor>& vectors() const { return vectors_; }
  /// Laplace-smoothed training frequency, used when no neighbour is similar.
  double prior(Index category) const { return priors_(category); }
  const std::vector<char>& members(Index category) const {
    return members_[static_cast<std::size_t>(category)];
  }

  /// Rebuilds an index from persisted parts.
  static KNNIndex from_parts(Eigen::SparseMatrix<double, Eigen::RowMajor> vectors,
                             std::vector<std::vector<char>> members, Index k, bool weighted);

 private:
  KNNIndex() = default;

  Eigen::SparseMatrix<double, Eigen::RowMajor> vectors_;
  std::vector<std::vector<char>> members_;  // [category][train doc]
  Eigen::VectorXd priors_;
  Index k_ = 1;
  bool weighted_ = true;

  void finish();
};

struct KNNModel {
  std::shared_ptr<const KNNIndex> index;
  Index category = 0;
};

double predict_proba(const KNNModel& model, const SparseDocument& doc);

}  // namespace mlabel
