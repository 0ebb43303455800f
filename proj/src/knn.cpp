#include "mlabel/knn.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace mlabel {

double knn_vote(std::span<const Neighbor> neighbors, std::span<const char> in_category,
                bool weighted, double fallback) {
  double hit = 0.0;
  double total = 0.0;
  for (const Neighbor& nb : neighbors) {
    const double w = weighted ? nb.similarity : 1.0;
    total += w;
    if (in_category[static_cast<std::size_t>(nb.index)]) hit += w;
  }
  if (!(total > 0.0)) return fallback;
  return std::clamp(hit / total, 0.0, 1.0);
}

KNNIndex::KNNIndex(const Dataset& train, Index k, bool weighted) : k_(k), weighted_(weighted) {
  if (k < 1) throw ConfigError("k-NN k must be at least 1");
  if (train.n_docs() == 0) throw DataError("cannot build a k-NN index from an empty dataset");

  std::vector<Eigen::Triplet<double>> triplets;
  for (Index i = 0; i < train.n_docs(); ++i) {
    const auto& features = train.document(i).features();
    double sq = 0.0;
    for (const Feature& f : features) sq += f.value * f.value;
    const double norm = std::sqrt(sq);
    for (const Feature& f : features) {
      if (f.value > 0.0) triplets.emplace_back(i, f.term, f.value / norm);
    }
  }
  vectors_.resize(train.n_docs(), train.n_terms());
  vectors_.setFromTriplets(triplets.begin(), triplets.end());

  members_.assign(static_cast<std::size_t>(train.n_categories()),
                  std::vector<char>(static_cast<std::size_t>(train.n_docs()), 0));
  for (Index i = 0; i < train.n_docs(); ++i) {
    for (Index j : train.document(i).labels()) {
      members_[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = 1;
    }
  }
  finish();
}

KNNIndex KNNIndex::from_parts(Eigen::SparseMatrix<double, Eigen::RowMajor> vectors,
                              std::vector<std::vector<char>> members, Index k, bool weighted) {
  if (k < 1) throw DataError("k-NN k must be at least 1");
  for (const auto& row : members) {
    if (static_cast<Index>(row.size()) != vectors.rows()) {
      throw DataError("k-NN membership rows do not match stored vectors");
    }
  }
  KNNIndex index;
  index.vectors_ = std::move(vectors);
  index.members_ = std::move(members);
  index.k_ = k;
  index.weighted_ = weighted;
  index.finish();
  return index;
}

void KNNIndex::finish() {
  vectors_.makeCompressed();
  k_ = std::min(k_, vectors_.rows());
  const double n = static_cast<double>(vectors_.rows());
  priors_.resize(static_cast<Index>(members_.size()));
  for (std::size_t j = 0; j < members_.size(); ++j) {
    const double n_c = static_cast<double>(std::count(members_[j].begin(), members_[j].end(), 1));
    priors_(static_cast<Index>(j)) = (n_c + 1.0) / (n + 2.0);
  }
}

std::vector<Neighbor> KNNIndex::neighbors(const SparseDocument& doc) const {
  if (doc.term_extent() > n_terms()) {
    throw DataError("document term index exceeds the k-NN vocabulary of " +
                    std::to_string(n_terms()));
  }
  Eigen::VectorXd query = Eigen::VectorXd::Zero(n_terms());
  for (const Feature& f : doc.features()) query(f.term) = f.value;
  const double norm = query.norm();
  if (norm > 0.0) query /= norm;
  const Eigen::VectorXd sims = vectors_ * query;

  std::vector<Index> order(static_cast<std::size_t>(sims.size()));
  std::iota(order.begin(), order.end(), Index{0});
  const auto better = [&sims](Index a, Index b) {
    return sims(a) > sims(b) || (sims(a) == sims(b) && a < b);
  };
  std::partial_sort(order.begin(), order.begin() + k_, order.end(), better);

  std::vector<Neighbor> out;
  out.reserve(static_cast<std::size_t>(k_));
  for (Index r = 0; r < k_; ++r) {
    const Index i = order[static_cast<std::size_t>(r)];
    out.push_back({i, std::max(sims(i), 0.0)});
  }
  return out;
}

double KNNIndex::predict(std::span<const Neighbor> nbs, Index category) const {
  return knn_vote(nbs, members(category), weighted_, prior(category));
}

Eigen::VectorXd KNNIndex::predict_all(const SparseDocument& doc) const {
  const std::vector<Neighbor> nbs = neighbors(doc);
  Eigen::VectorXd out(n_categories());
  for (Index j = 0; j < n_categories(); ++j) out(j) = predict(nbs, j);
  return out;
}

double predict_proba(const KNNModel& model, const SparseDocument& doc) {
  return model.index->predict(model.index->neighbors(doc), model.category);
}

}  // namespace mlabel
