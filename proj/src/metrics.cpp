#include "mlabel/metrics.hpp"

#include <algorithm>
#include <iterator>

namespace mlabel {
namespace {

void check_aligned(std::span<const LabelSet> truth, std::span<const LabelSet> predicted) {
  if (truth.size() != predicted.size()) {
    throw DataError("truth has " + std::to_string(truth.size()) + " documents, predictions have " +
                    std::to_string(predicted.size()));
  }
}

void check_range(const LabelSet& labels, Index p) {
  for (Index j : labels) {
    if (j < 0 || j >= p) {
      throw DataError("label index " + std::to_string(j) + " out of range for " +
                      std::to_string(p) + " categories");
    }
  }
}

double f1(Index tp, Index fp, Index fn) {
  const Index denom = 2 * tp + fp + fn;
  return denom == 0 ? 1.0 : 2.0 * static_cast<double>(tp) / static_cast<double>(denom);
}

}  // namespace

ContingencyTable contingency(std::span<const LabelSet> truth, std::span<const LabelSet> predicted,
                             Index n_categories) {
  check_aligned(truth, predicted);
  ContingencyTable table;
  table.n_docs = static_cast<Index>(truth.size());
  table.categories.assign(static_cast<std::size_t>(n_categories), {});
  for (std::size_t i = 0; i < truth.size(); ++i) {
    check_range(truth[i], n_categories);
    check_range(predicted[i], n_categories);
    for (Index j = 0; j < n_categories; ++j) {
      const bool t = std::binary_search(truth[i].begin(), truth[i].end(), j);
      const bool p = std::binary_search(predicted[i].begin(), predicted[i].end(), j);
      CategoryCounts& c = table.categories[static_cast<std::size_t>(j)];
      if (t && p) {
        ++c.tp;
      } else if (p) {
        ++c.fp;
      } else if (t) {
        ++c.fn;
      } else {
        ++c.tn;
      }
    }
  }
  return table;
}

F1Scores f1_scores(const ContingencyTable& table) {
  F1Scores out;
  Index tp = 0, fp = 0, fn = 0;
  double sum = 0.0;
  for (const CategoryCounts& c : table.categories) {
    const double v = f1(c.tp, c.fp, c.fn);
    out.per_category.push_back(v);
    sum += v;
    tp += c.tp;
    fp += c.fp;
    fn += c.fn;
  }
  out.micro = f1(tp, fp, fn);
  out.macro = table.categories.empty() ? 1.0 : sum / static_cast<double>(table.categories.size());
  return out;
}

double hamming_loss(std::span<const LabelSet> truth, std::span<const LabelSet> predicted,
                    Index n_categories) {
  check_aligned(truth, predicted);
  if (n_categories < 1) throw DataError("Hamming loss needs at least one category");
  if (truth.empty()) return 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    LabelSet diff;
    std::set_symmetric_difference(truth[i].begin(), truth[i].end(), predicted[i].begin(),
                                  predicted[i].end(), std::back_inserter(diff));
    total += static_cast<double>(diff.size()) / static_cast<double>(n_categories);
  }
  return total / static_cast<double>(truth.size());
}

double subset_01_loss(std::span<const LabelSet> truth, std::span<const LabelSet> predicted) {
  check_aligned(truth, predicted);
  if (truth.empty()) return 0.0;
  Index wrong = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) wrong += truth[i] != predicted[i] ? 1 : 0;
  return static_cast<double>(wrong) / static_cast<double>(truth.size());
}

double one_error(std::span<const LabelSet> truth, const ScoreMatrix& scores) {
  if (static_cast<Index>(truth.size()) != scores.rows()) {
    throw DataError("truth has " + std::to_string(truth.size()) + " documents, scores have " +
                    std::to_string(scores.rows()));
  }
  if (truth.empty()) return 0.0;
  Index errors = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (truth[i].empty()) {
      throw DataError("one-error undefined: document " + std::to_string(i) +
                      " has an empty true label set");
    }
    Index top = 0;
    for (Index j = 1; j < scores.cols(); ++j) {
      if (scores(static_cast<Index>(i), j) > scores(static_cast<Index>(i), top)) top = j;
    }
    if (!std::binary_search(truth[i].begin(), truth[i].end(), top)) ++errors;
  }
  return static_cast<double>(errors) / static_cast<double>(truth.size());
}

MetricsReport evaluate(std::span<const LabelSet> truth, std::span<const LabelSet> predicted,
                       const ScoreMatrix* scores, Index n_categories) {
  MetricsReport report;
  report.table = contingency(truth, predicted, n_categories);
  const F1Scores f = f1_scores(report.table);
  report.micro_f1 = f.micro;
  report.macro_f1 = f.macro;
  report.per_category_f1 = f.per_category;
  report.hamming_loss = hamming_loss(truth, predicted, n_categories);
  report.subset_01_loss = subset_01_loss(truth, predicted);
  if (scores != nullptr) report.one_error = one_error(truth, *scores);
  return report;
}

}  // namespace mlabel
