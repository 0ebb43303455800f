#include "mlabel/core.hpp"

#include <algorithm>
#include <cmath>

namespace mlabel {

SparseDocument::SparseDocument(Index doc_id, std::vector<Feature> features, LabelSet labels)
    : id_(doc_id), features_(std::move(features)), labels_(std::move(labels)) {
  if (doc_id < 0) throw DataError("document id must be non-negative");
  for (std::size_t i = 0; i < features_.size(); ++i) {
    const Feature& f = features_[i];
    if (f.term < 0) throw DataError("negative term index " + std::to_string(f.term));
    if (i > 0 && f.term <= features_[i - 1].term) {
      throw DataError(f.term == features_[i - 1].term
                          ? "duplicate term index " + std::to_string(f.term)
                          : "unsorted term index " + std::to_string(f.term));
    }
    if (!std::isfinite(f.value) || f.value < 0.0) {
      throw DataError("feature value for term " + std::to_string(f.term) +
                      " must be finite and non-negative");
    }
  }
  std::sort(labels_.begin(), labels_.end());
  if (std::adjacent_find(labels_.begin(), labels_.end()) != labels_.end()) {
    throw DataError("duplicate label index");
  }
  if (!labels_.empty() && labels_.front() < 0) throw DataError("negative label index");
}

bool SparseDocument::has_label(Index category) const {
  return std::binary_search(labels_.begin(), labels_.end(), category);
}

Index SparseDocument::term_extent() const {
  return features_.empty() ? 0 : features_.back().term + 1;
}

Dataset::Dataset(Index n_terms, Index n_categories, std::vector<SparseDocument> documents,
                 std::vector<std::string> category_names, std::vector<std::string> term_names)
    : n_terms_(n_terms),
      n_categories_(n_categories),
      documents_(std::move(documents)),
      category_names_(std::move(category_names)),
      term_names_(std::move(term_names)) {
  if (n_terms_ < 0) throw DataError("number of terms must be non-negative");
  if (n_categories_ < 1) throw DataError("number of categories must be positive");
  if (!category_names_.empty() && static_cast<Index>(category_names_.size()) != n_categories_) {
    throw DataError("category name count does not match number of categories");
  }
  if (!term_names_.empty() && static_cast<Index>(term_names_.size()) != n_terms_) {
    throw DataError("term name count does not match number of terms");
  }
  for (const auto& doc : documents_) {
    if (doc.term_extent() > n_terms_) {
      throw DataError("document " + std::to_string(doc.id()) + " has term index " +
                      std::to_string(doc.term_extent() - 1) + " >= " + std::to_string(n_terms_));
    }
    if (!doc.labels().empty() && doc.labels().back() >= n_categories_) {
      throw DataError("document " + std::to_string(doc.id()) + " has label index " +
                      std::to_string(doc.labels().back()) + " >= " +
                      std::to_string(n_categories_));
    }
  }
}

void Dataset::require_nonempty_labels() const {
  for (const auto& doc : documents_) {
    if (doc.labels().empty()) {
      throw DataError("document " + std::to_string(doc.id()) + " has an empty label set");
    }
  }
}

Eigen::MatrixXd Dataset::label_matrix() const {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n_docs(), n_categories_);
  for (Index i = 0; i < n_docs(); ++i) {
    for (Index j : document(i).labels()) out(i, j) = 1.0;
  }
  return out;
}

std::vector<LabelSet> Dataset::label_sets() const {
  std::vector<LabelSet> out;
  out.reserve(documents_.size());
  for (const auto& doc : documents_) out.push_back(doc.labels());
  return out;
}

ScoreMatrix::ScoreMatrix(Eigen::MatrixXd values) : values_(std::move(values)) {
  for (Index i = 0; i < values_.rows(); ++i) {
    for (Index j = 0; j < values_.cols(); ++j) {
      const double v = values_(i, j);
      if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
        throw DataError("score (" + std::to_string(i) + "," + std::to_string(j) +
                        ") = " + std::to_string(v) + " is outside [0,1]");
      }
    }
  }
}

LabelContext::LabelContext(Eigen::VectorXd values, Index excluded_category)
    : values_(std::move(values)), excluded_(excluded_category) {
  if (excluded_ < 0 || excluded_ > values_.size()) {
    throw DataError("excluded category out of range for context of length " +
                    std::to_string(values_.size()));
  }
  for (Index k = 0; k < values_.size(); ++k) {
    if (!(values_(k) >= 0.0 && values_(k) <= 1.0)) {
      throw DataError("label context values must lie in [0,1]");
    }
  }
}

LabelContext LabelContext::from_full(const Eigen::Ref<const Eigen::VectorXd>& full,
                                     Index excluded_category) {
  const Index p = full.size();
  if (excluded_category < 0 || excluded_category >= p) {
    throw DataError("excluded category " + std::to_string(excluded_category) +
                    " out of range for " + std::to_string(p) + " categories");
  }
  Eigen::VectorXd values(p - 1);
  values.head(excluded_category) = full.head(excluded_category);
  values.tail(p - 1 - excluded_category) = full.tail(p - 1 - excluded_category);
  return LabelContext(std::move(values), excluded_category);
}

Eigen::VectorXd LabelContext::expand(double excluded_value) const {
  const Index p = values_.size() + 1;
  Eigen::VectorXd full(p);
  full.head(excluded_) = values_.head(excluded_);
  full(excluded_) = excluded_value;
  full.tail(p - 1 - excluded_) = values_.tail(p - 1 - excluded_);
  return full;
}

std::string_view to_string(Mode mode) {
  switch (mode) {
    case Mode::Baseline: return "baseline";
    case Mode::M1: return "m1";
    case Mode::M2: return "m2";
  }
  return "baseline";
}

Mode parse_mode(std::string_view text) {
  if (text == "baseline") return Mode::Baseline;
  if (text == "m1") return Mode::M1;
  if (text == "m2") return Mode::M2;
  throw ConfigError("unknown mode '" + std::string(text) + "' (expected baseline, m1 or m2)");
}

}  // namespace mlabel
