#pragma once

#include "mlabel/core.hpp"

#include <cstdint>
#include <utility>

namespace mlabel {

/// If every label of `trigger` is present, add `added` with probability q.
struct ContextRule {
  LabelSet trigger;
  Index added = 0;
  double probability = 1.0;
};

struct ExclusionPair {
  Index first = 0;
  Index second = 0;
};

/// Generative process for corpora with injected label dependencies.
///
/// Per document: labels are drawn independently from `base_label_probs`
/// (redrawn while empty); every exclusion pair with both members present
/// drops the higher-indexed member; context rules fire in order; finally
/// `words_per_doc` tokens are drawn from the uniform mixture of the
/// document's per-label topics. Each topic is a symmetric Dirichlet draw
/// over the vocabulary with parameter `topic_concentration`.
///
/// A context rule never adds a label that an exclusion pair forbids given
/// the labels already present.
struct SynthConfig {
  Index n_train = 2000;
  Index n_test = 1000;
  Index n_categories = 8;
  Index vocab_size = 500;
  Index words_per_doc = 20;
  double topic_concentration = 0.1;
  std::vector<ExclusionPair> exclusion_pairs;
  std::vector<ContextRule> context_rules;
  /// Empty means 0.25 for every category.
  std::vector<double> base_label_probs;
  std::uint64_t seed = 1;

  /// Throws ConfigError on any violated invariant.
  void validate() const;
  std::vector<double> resolved_base_probs() const;
};

struct SyntheticCorpus {
  Dataset train;
  Dataset test;
};

SyntheticCorpus generate_synthetic(const SynthConfig& config);

/// p x p matrix of label co-occurrence counts; the diagonal holds marginals.
Eigen::MatrixXd cooccurrence_counts(const Dataset& ds);

}  // namespace mlabel
