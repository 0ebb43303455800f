#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace mlabel {

using Index = Eigen::Index;

/// Sorted set of 0-based category indices.
using LabelSet = std::vector<Index>;

/// Malformed or dimension-inconsistent data.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid configuration or hyperparameters.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Feature {
  Index term = 0;
  double value = 0.0;

  friend bool operator==(const Feature&, const Feature&) = default;
};

/// One instance: sparse term weights plus its true label set.
///
/// Term indices are strictly increasing and values are finite and
/// non-negative. Labels are stored sorted without duplicates; their upper
/// bound is checked by the owning Dataset.
class SparseDocument {
 public:
  SparseDocument() = default;
  SparseDocument(Index doc_id, std::vector<Feature> features, LabelSet labels);

  Index id() const { return id_; }
  const std::vector<Feature>& features() const { return features_; }
  const LabelSet& labels() const { return labels_; }
  bool has_label(Index category) const;
  /// Largest term index + 1, or 0 for an empty document.
  Index term_extent() const;

  friend bool operator==(const SparseDocument&, const SparseDocument&) = default;

 private:
  Index id_ = 0;
  std::vector<Feature> features_;
  LabelSet labels_;
};

/// Immutable in-memory corpus of n documents over m terms and p categories.
class Dataset {
 public:
  Dataset(Index n_terms, Index n_categories, std::vector<SparseDocument> documents,
          std::vector<std::string> category_names = {},
          std::vector<std::string> term_names = {});

  Index n_docs() const { return static_cast<Index>(documents_.size()); }
  Index n_terms() const { return n_terms_; }
  Index n_categories() const { return n_categories_; }
  const std::vector<SparseDocument>& documents() const { return documents_; }
  const SparseDocument& document(Index i) const { return documents_.at(static_cast<std::size_t>(i)); }
  const std::vector<std::string>& category_names() const { return category_names_; }
  const std::vector<std::string>& term_names() const { return term_names_; }

  /// Throws DataError naming the first document whose label set is empty.
  void require_nonempty_labels() const;

  /// n x p indicator matrix of the true labels.
  Eigen::MatrixXd label_matrix() const;
  std::vector<LabelSet> label_sets() const;

  friend bool operator==(const Dataset&, const Dataset&) = default;

 private:
  Index n_terms_;
  Index n_categories_;
  std::vector<SparseDocument> documents_;
  std::vector<std::string> category_names_;
  std::vector<std::string> term_names_;
};

/// n x p matrix of posterior estimates; every entry is finite and in [0,1].
class ScoreMatrix {
 public:
  ScoreMatrix() = default;
  explicit ScoreMatrix(Eigen::MatrixXd values);

  Index rows() const { return values_.rows(); }
  Index cols() const { return values_.cols(); }
  double operator()(Index i, Index j) const { return values_(i, j); }
  auto row(Index i) const { return values_.row(i); }
  const Eigen::MatrixXd& matrix() const { return values_; }

 private:
  Eigen::MatrixXd values_;
};

/// The other p-1 label values seen by the classifier of one category.
///
/// Component k stands for category k when k < excluded, k+1 otherwise.
class LabelContext {
 public:
  LabelContext(Eigen::VectorXd values, Index excluded_category);

  /// Drops coordinate `excluded_category` of a full p-vector.
  static LabelContext from_full(const Eigen::Ref<const Eigen::VectorXd>& full,
                                Index excluded_category);

  const Eigen::VectorXd& values() const { return values_; }
  Index excluded_category() const { return excluded_; }
  Index size() const { return values_.size(); }
  Index category_of(Index component) const {
    return component < excluded_ ? component : component + 1;
  }
  /// Reinserts `excluded_value` at the excluded position.
  Eigen::VectorXd expand(double excluded_value) const;

 private:
  Eigen::VectorXd values_;
  Index excluded_;
};

enum class Mode { Baseline, M1, M2 };

std::string_view to_string(Mode mode);
Mode parse_mode(std::string_view text);

}  // namespace mlabel
