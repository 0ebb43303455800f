#pragma once

#include "mlabel/core.hpp"

#include <optional>
#include <span>

namespace mlabel {

struct CategoryCounts {
  Index tp = 0;
  Index fp = 0;
  Index fn = 0;
  Index tn = 0;

  friend bool operator==(const CategoryCounts&, const CategoryCounts&) = default;
};

/// Per-category confusion counts; tp + fp + fn + tn = n_docs for each.
struct ContingencyTable {
  Index n_docs = 0;
  std::vector<CategoryCounts> categories;
};

ContingencyTable contingency(std::span<const LabelSet> truth, std::span<const LabelSet> predicted,
                             Index n_categories);

struct F1Scores {
  double micro = 0.0;
  double macro = 0.0;
  std::vector<double> per_category;
};

/// F1 = 2TP / (2TP + FP + FN), taken as 1 when the denominator is 0.
/// Macro averages per-category F1; micro is F1 of the pooled counts.
F1Scores f1_scores(const ContingencyTable& table);

/// Mean over documents of |truth xor predicted| / p.
double hamming_loss(std::span<const LabelSet> truth, std::span<const LabelSet> predicted,
                    Index n_categories);
/// Fraction of documents whose predicted set differs from the true set.
double subset_01_loss(std::span<const LabelSet> truth, std::span<const LabelSet> predicted);
/// Fraction of documents whose top-scored label (lowest index on ties) is not
/// a true label. Throws DataError naming the document when a true set is empty.
double one_error(std::span<const LabelSet> truth, const ScoreMatrix& scores);

struct MetricsReport {
  double micro_f1 = 0.0;
  double macro_f1 = 0.0;
  double hamming_loss = 0.0;
  double subset_01_loss = 0.0;
  std::optional<double> one_error;
  std::vector<double> per_category_f1;
  ContingencyTable table;
};

/// All measures for one system. One-error is skipped when `scores` is null.
MetricsReport evaluate(std::span<const LabelSet> truth, std::span<const LabelSet> predicted,
                       const ScoreMatrix* scores, Index n_categories);

}  // namespace mlabel
