#include "mlabel/synthetic.hpp"

#include <algorithm>
#include <map>
#include <random>

namespace mlabel {
namespace {

bool excluded_pair(const SynthConfig& cfg, Index a, Index b) {
  return std::any_of(cfg.exclusion_pairs.begin(), cfg.exclusion_pairs.end(),
                     [a, b](const ExclusionPair& e) {
                       return (e.first == a && e.second == b) || (e.first == b && e.second == a);
                     });
}

LabelSet draw_labels(const SynthConfig& cfg, const std::vector<double>& base,
                     std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const Index p = cfg.n_categories;
  std::vector<char> present(static_cast<std::size_t>(p), 0);
  bool any = false;
  while (!any) {
    for (Index j = 0; j < p; ++j) {
      present[static_cast<std::size_t>(j)] = unit(rng) < base[static_cast<std::size_t>(j)];
      any = any || present[static_cast<std::size_t>(j)];
    }
  }
  for (const ExclusionPair& e : cfg.exclusion_pairs) {
    auto& a = present[static_cast<std::size_t>(e.first)];
    auto& b = present[static_cast<std::size_t>(e.second)];
    if (a && b) (e.first > e.second ? a : b) = 0;
  }
  for (const ContextRule& rule : cfg.context_rules) {
    const bool fires = std::all_of(rule.trigger.begin(), rule.trigger.end(), [&](Index t) {
      return present[static_cast<std::size_t>(t)] != 0;
    });
    if (!fires) continue;
    // Always consume one draw per firing rule so the stream does not depend on
    // whether the addition is blocked.
    const bool accept = unit(rng) < rule.probability;
    if (!accept || present[static_cast<std::size_t>(rule.added)]) continue;
    bool blocked = false;
    for (Index j = 0; j < p && !blocked; ++j) {
      blocked = present[static_cast<std::size_t>(j)] && excluded_pair(cfg, j, rule.added);
    }
    if (!blocked) present[static_cast<std::size_t>(rule.added)] = 1;
  }
  LabelSet labels;
  for (Index j = 0; j < p; ++j) {
    if (present[static_cast<std::size_t>(j)]) labels.push_back(j);
  }
  return labels;
}

Dataset draw_corpus(const SynthConfig& cfg, const std::vector<double>& base,
                    std::vector<std::discrete_distribution<Index>>& topics, Index n_docs,
                    std::mt19937_64& rng) {
  std::vector<SparseDocument> docs;
  docs.reserve(static_cast<std::size_t>(n_docs));
  for (Index i = 0; i < n_docs; ++i) {
    LabelSet labels = draw_labels(cfg, base, rng);
    std::uniform_int_distribution<std::size_t> pick(0, labels.size() - 1);
    std::map<Index, double> counts;
    for (Index w = 0; w < cfg.words_per_doc; ++w) {
      const Index topic = labels[pick(rng)];
      counts[topics[static_cast<std::size_t>(topic)](rng)] += 1.0;
    }
    std::vector<Feature> features;
    features.reserve(counts.size());
    for (const auto& [term, count] : counts) features.push_back({term, count});
    docs.emplace_back(i, std::move(features), std::move(labels));
  }
  return Dataset(cfg.vocab_size, cfg.n_categories, std::move(docs));
}

}  // namespace

std::vector<double> SynthConfig::resolved_base_probs() const {
  if (base_label_probs.empty()) return std::vector<double>(static_cast<std::size_t>(n_categories), 0.25);
  return base_label_probs;
}

void SynthConfig::validate() const {
  if (n_train < 1) throw ConfigError("n_train must be at least 1");
  if (n_test < 0) throw ConfigError("n_test must be non-negative");
  if (n_categories < 1) throw ConfigError("p must be at least 1");
  if (vocab_size < 1) throw ConfigError("vocab_size must be at least 1");
  if (words_per_doc < 1) throw ConfigError("words_per_doc must be at least 1");
  if (!(topic_concentration > 0.0)) throw ConfigError("topic_concentration must be positive");
  const auto in_range = [this](Index j) { return j >= 0 && j < n_categories; };
  if (!base_label_probs.empty()) {
    if (static_cast<Index>(base_label_probs.size()) != n_categories) {
      throw ConfigError("base_label_probs must have one entry per category");
    }
    bool any_positive = false;
    for (double q : base_label_probs) {
      if (!(q >= 0.0 && q <= 1.0)) throw ConfigError("base_label_probs must lie in [0,1]");
      any_positive = any_positive || q > 0.0;
    }
    if (!any_positive) throw ConfigError("at least one base label probability must be positive");
  }
  for (const ExclusionPair& e : exclusion_pairs) {
    if (!in_range(e.first) || !in_range(e.second)) throw ConfigError("exclusion pair out of range");
    if (e.first == e.second) throw ConfigError("exclusion pair members must differ");
  }
  for (const ContextRule& rule : context_rules) {
    if (!in_range(rule.added)) throw ConfigError("context rule label out of range");
    if (!(rule.probability >= 0.0 && rule.probability <= 1.0)) {
      throw ConfigError("context rule probability must lie in [0,1]");
    }
    for (Index t : rule.trigger) {
      if (!in_range(t)) throw ConfigError("context rule trigger out of range");
      if (t == rule.added) throw ConfigError("context rule adds a label from its own trigger set");
    }
  }
}

SyntheticCorpus generate_synthetic(const SynthConfig& config) {
  config.validate();
  const std::vector<double> base = config.resolved_base_probs();
  std::mt19937_64 rng(config.seed);

  std::gamma_distribution<double> gamma(config.topic_concentration, 1.0);
  std::vector<std::discrete_distribution<Index>> topics;
  topics.reserve(static_cast<std::size_t>(config.n_categories));
  for (Index j = 0; j < config.n_categories; ++j) {
    std::vector<double> weights(static_cast<std::size_t>(config.vocab_size));
    double total = 0.0;
    for (double& w : weights) {
      w = gamma(rng);
      total += w;
    }
    if (total <= 0.0) std::fill(weights.begin(), weights.end(), 1.0);
    topics.emplace_back(weights.begin(), weights.end());
  }

  Dataset train = draw_corpus(config, base, topics, config.n_train, rng);
  Dataset test = draw_corpus(config, base, topics, config.n_test, rng);
  return {std::move(train), std::move(test)};
}

Eigen::MatrixXd cooccurrence_counts(const Dataset& ds) {
  const Index p = ds.n_categories();
  Eigen::MatrixXd counts = Eigen::MatrixXd::Zero(p, p);
  for (const auto& doc : ds.documents()) {
    for (Index a : doc.labels()) {
      for (Index b : doc.labels()) counts(a, b) += 1.0;
    }
  }
  return counts;
}

}  // namespace mlabel
