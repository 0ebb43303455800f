#include "mlabel/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace mlabel {

TermRemap TermRemap::identity(Index n_terms) {
  TermRemap r;
  r.original_terms = n_terms;
  r.kept_terms.resize(static_cast<std::size_t>(n_terms));
  std::iota(r.kept_terms.begin(), r.kept_terms.end(), Index{0});
  return r;
}

std::optional<Index> TermRemap::map(Index old_term) const {
  auto it = std::lower_bound(kept_terms.begin(), kept_terms.end(), old_term);
  if (it == kept_terms.end() || *it != old_term) return std::nullopt;
  return static_cast<Index>(it - kept_terms.begin());
}

bool TermRemap::is_identity() const {
  if (size() != original_terms) return false;
  for (Index i = 0; i < size(); ++i) {
    if (kept_terms[static_cast<std::size_t>(i)] != i) return false;
  }
  return true;
}

Dataset apply_remap(const Dataset& ds, const TermRemap& remap) {
  if (ds.n_terms() > remap.original_terms) {
    throw DataError("dataset has " + std::to_string(ds.n_terms()) +
                    " terms but the vocabulary map covers " +
                    std::to_string(remap.original_terms));
  }
  std::vector<SparseDocument> docs;
  docs.reserve(static_cast<std::size_t>(ds.n_docs()));
  for (const auto& doc : ds.documents()) {
    std::vector<Feature> features;
    for (const Feature& f : doc.features()) {
      if (auto mapped = remap.map(f.term)) features.push_back({*mapped, f.value});
    }
    docs.emplace_back(doc.id(), std::move(features), doc.labels());
  }
  return Dataset(remap.size(), ds.n_categories(), std::move(docs), ds.category_names());
}

Eigen::VectorXd document_frequencies(const Dataset& ds) {
  Eigen::VectorXd df = Eigen::VectorXd::Zero(ds.n_terms());
  for (const auto& doc : ds.documents()) {
    for (const Feature& f : doc.features()) {
      if (f.value > 0.0) df(f.term) += 1.0;
    }
  }
  return df;
}

std::pair<Dataset, TermRemap> prune_vocabulary(const Dataset& ds, Index min_df) {
  if (min_df < 1) throw ConfigError("min_df must be at least 1");
  const Eigen::VectorXd df = document_frequencies(ds);
  TermRemap remap;
  remap.original_terms = ds.n_terms();
  for (Index t = 0; t < ds.n_terms(); ++t) {
    if (min_df == 1 || df(t) >= static_cast<double>(min_df)) remap.kept_terms.push_back(t);
  }
  return {apply_remap(ds, remap), std::move(remap)};
}

double information_gain(double a, double b, double c, double d) {
  const double n = a + b + c + d;
  if (n <= 0.0) return 0.0;
  const double pos = a + c;
  if (pos <= 0.0 || pos >= n) return 0.0;
  const auto cell = [n](double joint, double row, double col) {
    if (joint <= 0.0) return 0.0;
    return joint / n * std::log(joint * n / (row * col));
  };
  const double with_term = a + b;
  const double without_term = c + d;
  const double neg = b + d;
  const double ig = cell(a, with_term, pos) + cell(b, with_term, neg) +
                    cell(c, without_term, pos) + cell(d, without_term, neg);
  // Rounding can leave tiny negative values for independent terms.
  return std::max(ig, 0.0);
}

double chi_square(double a, double b, double c, double d) {
  const double n = a + b + c + d;
  const double denom = (a + c) * (b + d) * (a + b) * (c + d);
  if (denom <= 0.0) return 0.0;
  const double cross = a * d - c * b;
  return n * cross * cross / denom;
}

Eigen::VectorXd term_scores(const Dataset& ds, SelectionMethod method) {
  const Index m = ds.n_terms();
  const Index p = ds.n_categories();
  const double n = static_cast<double>(ds.n_docs());

  Eigen::MatrixXd joint = Eigen::MatrixXd::Zero(m, p);  // A cells
  Eigen::VectorXd df = Eigen::VectorXd::Zero(m);
  Eigen::VectorXd cat_count = Eigen::VectorXd::Zero(p);
  for (const auto& doc : ds.documents()) {
    for (Index j : doc.labels()) cat_count(j) += 1.0;
    for (const Feature& f : doc.features()) {
      if (f.value <= 0.0) continue;
      df(f.term) += 1.0;
      for (Index j : doc.labels()) joint(f.term, j) += 1.0;
    }
  }

  Eigen::VectorXd scores = Eigen::VectorXd::Zero(m);
  for (Index t = 0; t < m; ++t) {
    for (Index j = 0; j < p; ++j) {
      const double a = joint(t, j);
      const double b = df(t) - a;
      const double c = cat_count(j) - a;
      const double d = n - a - b - c;
      if (method == SelectionMethod::IgSum) {
        scores(t) += information_gain(a, b, c, d);
      } else {
        scores(t) = std::max(scores(t), chi_square(a, b, c, d));
      }
    }
  }
  return scores;
}

std::pair<Dataset, FeatureSelection> select_features(const Dataset& ds, SelectionMethod method,
                                                     Index k) {
  if (k < 1) throw ConfigError("feature selection k must be at least 1");
  const Eigen::VectorXd scores = term_scores(ds, method);
  const Eigen::VectorXd df = document_frequencies(ds);

  std::vector<Index> live;
  for (Index t = 0; t < ds.n_terms(); ++t) {
    if (df(t) > 0.0) live.push_back(t);
  }
  std::stable_sort(live.begin(), live.end(),
                   [&scores](Index x, Index y) { return scores(x) > scores(y); });
  if (static_cast<Index>(live.size()) > k) live.resize(static_cast<std::size_t>(k));
  std::sort(live.begin(), live.end());

  FeatureSelection sel;
  sel.method = method;
  sel.k = k;
  sel.kept_terms = live;
  sel.remap.original_terms = ds.n_terms();
  sel.remap.kept_terms = std::move(live);
  return {apply_remap(ds, sel.remap), std::move(sel)};
}

Eigen::VectorXd fit_idf(const Dataset& ds) {
  const Eigen::VectorXd df = document_frequencies(ds);
  const double n = static_cast<double>(ds.n_docs());
  Eigen::VectorXd idf = Eigen::VectorXd::Zero(ds.n_terms());
  for (Index t = 0; t < ds.n_terms(); ++t) {
    if (df(t) > 0.0) idf(t) = std::log(n / df(t));
  }
  return idf;
}

Dataset apply_tfidf(const Dataset& ds, const Eigen::VectorXd& idf) {
  if (idf.size() != ds.n_terms()) {
    throw DataError("idf vector has " + std::to_string(idf.size()) + " terms, dataset has " +
                    std::to_string(ds.n_terms()));
  }
  std::vector<SparseDocument> docs;
  docs.reserve(static_cast<std::size_t>(ds.n_docs()));
  for (const auto& doc : ds.documents()) {
    std::vector<Feature> features;
    double sq = 0.0;
    for (const Feature& f : doc.features()) {
      const double w = f.value * idf(f.term);
      if (w > 0.0) {
        features.push_back({f.term, w});
        sq += w * w;
      }
    }
    if (sq > 0.0) {
      const double norm = std::sqrt(sq);
      for (Feature& f : features) f.value /= norm;
    }
    docs.emplace_back(doc.id(), std::move(features), doc.labels());
  }
  return Dataset(ds.n_terms(), ds.n_categories(), std::move(docs), ds.category_names(),
                 ds.term_names());
}

Dataset tfidf_transform(const Dataset& ds) { return apply_tfidf(ds, fit_idf(ds)); }

Dataset FeaturePipeline::apply(const Dataset& ds) const {
  // Terms beyond the training vocabulary were never seen; they are dropped.
  TermRemap widened = remap;
  widened.original_terms = std::max(remap.original_terms, ds.n_terms());
  Dataset reduced = widened.is_identity() && ds.n_terms() == widened.original_terms
                        ? ds
                        : apply_remap(ds, widened);
  if (idf) return apply_tfidf(reduced, *idf);
  return reduced;
}

std::pair<FeaturePipeline, Dataset> fit_pipeline(const Dataset& train,
                                                 const PreprocessOptions& options) {
  FeaturePipeline pipeline;
  auto [pruned, prune_map] = prune_vocabulary(train, options.min_df);
  Dataset reduced = std::move(pruned);
  std::vector<Index> kept = prune_map.kept_terms;
  if (options.selection) {
    auto [selected, sel] = select_features(reduced, *options.selection, options.selection_k);
    reduced = std::move(selected);
    // Compose: selection indices are relative to the pruned vocabulary.
    std::vector<Index> composed;
    composed.reserve(sel.kept_terms.size());
    for (Index t : sel.kept_terms) composed.push_back(kept[static_cast<std::size_t>(t)]);
    kept = std::move(composed);
  }
  pipeline.remap.original_terms = train.n_terms();
  pipeline.remap.kept_terms = std::move(kept);
  if (options.weighting == Weighting::TfIdf) {
    pipeline.idf = fit_idf(reduced);
    reduced = apply_tfidf(reduced, *pipeline.idf);
  }
  return {std::move(pipeline), std::move(reduced)};
}

}  // namespace mlabel
