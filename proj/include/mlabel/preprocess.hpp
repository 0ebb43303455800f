#pragma once

#include "mlabel/core.hpp"

#include <optional>
#include <utility>

namespace mlabel {

/// Maps a subset of an original vocabulary onto dense new indices,
/// preserving order. New index of kept_terms[i] is i.
struct TermRemap {
  Index original_terms = 0;
  std::vector<Index> kept_terms;

  static TermRemap identity(Index n_terms);
  std::optional<Index> map(Index old_term) const;
  Index size() const { return static_cast<Index>(kept_terms.size()); }
  bool is_identity() const;

  friend bool operator==(const TermRemap&, const TermRemap&) = default;
};

/// Drops features of unmapped terms and reindexes the rest.
Dataset apply_remap(const Dataset& ds, const TermRemap& remap);

/// Number of documents in which each term has a positive value.
Eigen::VectorXd document_frequencies(const Dataset& ds);

/// Removes terms whose document frequency is below `min_df`.
std::pair<Dataset, TermRemap> prune_vocabulary(const Dataset& ds, Index min_df);

enum class SelectionMethod { IgSum, ChiMax };

struct FeatureSelection {
  SelectionMethod method = SelectionMethod::IgSum;
  Index k = 0;
  std::vector<Index> kept_terms;
  TermRemap remap;
};

// Presence/label 2x2 table: a = (term, cat), b = (term, not cat),
// c = (no term, cat), d = (no term, not cat). Natural log.
double information_gain(double a, double b, double c, double d);
double chi_square(double a, double b, double c, double d);

/// Per-term global score: IG summed over categories or chi-square maximized
/// over categories. Degenerate tables contribute 0.
Eigen::VectorXd term_scores(const Dataset& ds, SelectionMethod method);

/// Keeps the k best-scoring live terms (df > 0); ties go to the lower index.
std::pair<Dataset, FeatureSelection> select_features(const Dataset& ds, SelectionMethod method,
                                                     Index k);

/// idf(t) = ln(n_docs / df(t)), 0 for terms absent from the fitting corpus.
Eigen::VectorXd fit_idf(const Dataset& ds);
/// tf * idf followed by L2 normalization of each document.
Dataset apply_tfidf(const Dataset& ds, const Eigen::VectorXd& idf);
Dataset tfidf_transform(const Dataset& ds);

enum class Weighting { Tf, TfIdf };

/// Vocabulary reduction and weighting fitted on a training corpus and
/// replayed on any corpus in the original term space.
struct FeaturePipeline {
  TermRemap remap;
  std::optional<Eigen::VectorXd> idf;

  Dataset apply(const Dataset& ds) const;
};

struct PreprocessOptions {
  Index min_df = 1;
  std::optional<SelectionMethod> selection;
  Index selection_k = 1000;
  Weighting weighting = Weighting::Tf;
};

/// Fits the pipeline on `train` and returns it with the transformed corpus.
std::pair<FeaturePipeline, Dataset> fit_pipeline(const Dataset& train,
                                                 const PreprocessOptions& options);

}  // namespace mlabel
