#include "mlabel/commands.hpp"

#include "mlabel/dataset_io.hpp"
#include "mlabel/model_io.hpp"
#include "mlabel/report_io.hpp"

#include <cstdio>
#include <map>
#include <set>
#include <sstream>

namespace mlabel::cli {
namespace {

template <typename T>
T get(const Json& flat, const char* key) {
  try {
    return flat.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError(std::string("config field '") + key + "' has the wrong type");
  }
}

Index get_index(const Json& flat, const char* key) {
  const Json& v = flat.at(key);
  if (!v.is_number_integer()) throw ConfigError(std::string("config field '") + key + "' must be an integer");
  return v.get<Index>();
}

double get_real(const Json& flat, const char* key) {
  const Json& v = flat.at(key);
  if (!v.is_number()) throw ConfigError(std::string("config field '") + key + "' must be a number");
  return v.get<double>();
}

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys{
      "train", "test", "model", "out", "mode", "content", "label_clf", "min_df", "feat_sel",
      "feat_k", "weighting", "alpha", "binarize_counts", "k", "knn_weighted", "lambda", "C",
      "label_lambda", "label_C", "platt_folds", "seed", "force_nonempty", "allow_empty_labels",
      "epsilon", "n_train", "n_test", "p", "vocab_size", "words_per_doc", "topic_concentration",
      "exclusion_pairs", "context_rules", "base_label_probs"};
  return keys;
}

std::string mode_label(const ExperimentConfig& cfg, Mode mode) {
  std::string name;
  switch (cfg.train.content.kind) {
    case ContentKind::NaiveBayes: name = "NB"; break;
    case ContentKind::KNN: name = "k-NN"; break;
    case ContentKind::SVM: name = "SVM"; break;
    case ContentKind::LogReg: name = "LR"; break;
  }
  if (mode == Mode::Baseline) return name;
  name += cfg.train.label.kind == LabelKind::LogReg ? " + LOGREG" : " + SVM";
  name += mode == Mode::M1 ? " + M1" : " + M2";
  return name;
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

Dataset with_dims(const Dataset& ds, Index n_terms, Index n_categories) {
  if (ds.n_terms() == n_terms && ds.n_categories() == n_categories) return ds;
  return Dataset(n_terms, n_categories, ds.documents());
}

std::pair<Dataset, Dataset> load_corpora(const ExperimentConfig& cfg, bool& synthesized) {
  if (cfg.train_path) {
    if (!cfg.test_path) throw ConfigError("'train' given without 'test'");
    synthesized = false;
    ParseOptions opts;
    opts.allow_empty_labels = cfg.allow_empty_labels;
    const Dataset train = read_dataset(*cfg.train_path, opts);
    const Dataset test = read_dataset(*cfg.test_path, opts);
    // Inferred dimensions can differ when the highest term or category is
    // absent from one file; both sides use the larger extent.
    const Index m = std::max(train.n_terms(), test.n_terms());
    const Index p = std::max(train.n_categories(), test.n_categories());
    return {with_dims(train, m, p), with_dims(test, m, p)};
  }
  synthesized = true;
  SyntheticCorpus corpus = generate_synthetic(cfg.synth);
  return {std::move(corpus.train), std::move(corpus.test)};
}

}  // namespace

double delta_percent(double system, double baseline) {
  return 100.0 * (system - baseline) / baseline;
}

ExperimentConfig parse_config(const Json& flat) {
  if (!flat.is_object()) throw ConfigError("config must be a JSON object");
  for (const auto& [key, value] : flat.items()) {
    if (!known_keys().contains(key)) throw ConfigError("unknown config field '" + key + "'");
  }
  ExperimentConfig cfg;
  const auto has = [&flat](const char* key) { return flat.contains(key) && !flat.at(key).is_null(); };

  if (has("train")) cfg.train_path = get<std::string>(flat, "train");
  if (has("test")) cfg.test_path = get<std::string>(flat, "test");
  if (has("model")) cfg.model_path = get<std::string>(flat, "model");
  if (has("out")) cfg.out_dir = get<std::string>(flat, "out");
  if (has("mode")) {
    cfg.modes.clear();
    const Json& m = flat.at("mode");
    if (m.is_string()) {
      cfg.modes.push_back(parse_mode(m.get<std::string>()));
    } else if (m.is_array()) {
      for (const Json& e : m) {
        if (!e.is_string()) throw ConfigError("config field 'mode' must hold strings");
        cfg.modes.push_back(parse_mode(e.get<std::string>()));
      }
    } else {
      throw ConfigError("config field 'mode' must be a string or a list");
    }
    if (cfg.modes.empty()) throw ConfigError("at least one mode is required");
  }

  TrainConfig& tc = cfg.train;
  if (has("content")) tc.content.kind = parse_content_kind(get<std::string>(flat, "content"));
  if (has("label_clf")) tc.label.kind = parse_label_kind(get<std::string>(flat, "label_clf"));
  if (has("min_df")) tc.preprocess.min_df = get_index(flat, "min_df");
  if (tc.preprocess.min_df < 1) throw ConfigError("min_df must be at least 1");
  if (has("feat_sel")) {
    const auto sel = get<std::string>(flat, "feat_sel");
    if (sel == "none") {
      tc.preprocess.selection.reset();
    } else if (sel == "ig-sum") {
      tc.preprocess.selection = SelectionMethod::IgSum;
    } else if (sel == "chi-max") {
      tc.preprocess.selection = SelectionMethod::ChiMax;
    } else {
      throw ConfigError("unknown feature selection '" + sel + "' (expected none, ig-sum or chi-max)");
    }
  }
  if (has("feat_k")) tc.preprocess.selection_k = get_index(flat, "feat_k");
  if (tc.preprocess.selection_k < 1) throw ConfigError("feat_k must be at least 1");
  tc.preprocess.weighting = default_weighting(tc.content.kind);
  if (has("weighting")) {
    const auto w = get<std::string>(flat, "weighting");
    if (w == "tf") {
      tc.preprocess.weighting = Weighting::Tf;
    } else if (w == "tfidf") {
      tc.preprocess.weighting = Weighting::TfIdf;
    } else {
      throw ConfigError("unknown weighting '" + w + "' (expected tf or tfidf)");
    }
  }
  if (has("alpha")) tc.content.nb.alpha = get_real(flat, "alpha");
  if (!(tc.content.nb.alpha > 0.0)) throw ConfigError("alpha must be positive");
  if (has("binarize_counts")) tc.content.nb.binarize_counts = get<bool>(flat, "binarize_counts");
  if (has("k")) tc.content.knn_k = get_index(flat, "k");
  if (tc.content.knn_k < 1) throw ConfigError("k must be at least 1");
  if (has("knn_weighted")) tc.content.knn_weighted = get<bool>(flat, "knn_weighted");
  if (has("lambda")) tc.content.lambda = tc.label.lambda = get_real(flat, "lambda");
  if (has("C")) tc.content.C = tc.label.C = get_real(flat, "C");
  if (has("label_lambda")) tc.label.lambda = get_real(flat, "label_lambda");
  if (has("label_C")) tc.label.C = get_real(flat, "label_C");
  if (!(tc.content.lambda >= 0.0) || !(tc.label.lambda >= 0.0)) throw ConfigError("lambda must be non-negative");
  if (!(tc.content.C > 0.0) || !(tc.label.C > 0.0)) throw ConfigError("C must be positive");
  if (has("platt_folds")) {
    tc.content.platt_folds = tc.label.platt_folds = static_cast<int>(get_index(flat, "platt_folds"));
  }
  if (has("epsilon")) tc.epsilon_clamp = get_real(flat, "epsilon");
  CombinerConfig{Mode::M2, tc.epsilon_clamp, false}.validate();
  if (has("force_nonempty")) cfg.force_nonempty = get<bool>(flat, "force_nonempty");
  if (has("allow_empty_labels")) cfg.allow_empty_labels = get<bool>(flat, "allow_empty_labels");
  if (has("seed")) {
    const Json& s = flat.at("seed");
    if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<long long>() >= 0)) {
      throw ConfigError("seed must be a non-negative integer");
    }
    cfg.seed = s.get<std::uint64_t>();
  }

  SynthConfig& sc = cfg.synth;
  sc.seed = cfg.seed;
  if (has("n_train")) sc.n_train = get_index(flat, "n_train");
  if (has("n_test")) sc.n_test = get_index(flat, "n_test");
  if (has("p")) sc.n_categories = get_index(flat, "p");
  if (has("vocab_size")) sc.vocab_size = get_index(flat, "vocab_size");
  if (has("words_per_doc")) sc.words_per_doc = get_index(flat, "words_per_doc");
  if (has("topic_concentration")) sc.topic_concentration = get_real(flat, "topic_concentration");
  if (has("base_label_probs")) sc.base_label_probs = get<std::vector<double>>(flat, "base_label_probs");
  if (has("exclusion_pairs")) {
    for (const Json& pair : flat.at("exclusion_pairs")) {
      if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number_integer() ||
          !pair[1].is_number_integer()) {
        throw ConfigError("exclusion_pairs entries must be [a, b] integer pairs");
      }
      sc.exclusion_pairs.push_back({pair[0].get<Index>(), pair[1].get<Index>()});
    }
  }
  if (has("context_rules")) {
    for (const Json& rule : flat.at("context_rules")) {
      if (!rule.is_object() || !rule.contains("trigger") || !rule.contains("add")) {
        throw ConfigError("context_rules entries need 'trigger' and 'add'");
      }
      ContextRule r;
      try {
        r.trigger = rule.at("trigger").get<LabelSet>();
        r.added = rule.at("add").get<Index>();
        r.probability = rule.contains("q") ? rule.at("q").get<double>() : 1.0;
      } catch (const nlohmann::json::exception&) {
        throw ConfigError("malformed context rule");
      }
      sc.context_rules.push_back(std::move(r));
    }
  }
  if (!cfg.train_path) sc.validate();
  return cfg;
}

SynthResult run_synth(const ExperimentConfig& config) {
  SynthResult result{generate_synthetic(config.synth), {}};
  const Dataset& train = result.corpus.train;
  const Eigen::MatrixXd co = cooccurrence_counts(train);
  std::ostringstream s;
  s << "train: n=" << train.n_docs() << " m=" << train.n_terms() << " p=" << train.n_categories()
    << "\n";
  s << "test: n=" << result.corpus.test.n_docs() << "\n";
  s << "label marginals (train):";
  for (Index j = 0; j < train.n_categories(); ++j) {
    s << ' ' << fixed(co(j, j) / static_cast<double>(train.n_docs()), 4);
  }
  s << "\n";
  for (const ExclusionPair& e : config.synth.exclusion_pairs) {
    s << "exclusion pair (" << e.first << "," << e.second
      << ") co-occurrences: " << static_cast<Index>(co(e.first, e.second)) << "\n";
  }
  result.summary = s.str();

  const std::string train_text = serialize_dataset(result.corpus.train);
  const std::string test_text = serialize_dataset(result.corpus.test);
  std::filesystem::create_directories(config.out_dir);
  write_text_file(config.out_dir / "train.txt", train_text);
  write_text_file(config.out_dir / "test.txt", test_text);
  return result;
}

TrainedModel run_train(const ExperimentConfig& config) {
  if (!config.train_path) throw ConfigError("train requires 'train'");
  ParseOptions opts;
  opts.allow_empty_labels = config.allow_empty_labels;
  const Dataset train = read_dataset(*config.train_path, opts);
  TrainConfig tc = config.train;
  tc.mode = config.modes.back();
  TrainedModel model = train_model(train, tc);
  const std::string text = serialize_model(model);
  std::filesystem::create_directories(config.out_dir);
  write_text_file(config.model_path.value_or(config.out_dir / "model.txt"), text);
  return model;
}

void run_predict(const ExperimentConfig& config) {
  if (!config.test_path) throw ConfigError("predict requires 'test'");
  const TrainedModel model = load_model(config.model_path.value_or(config.out_dir / "model.txt"));
  ParseOptions opts;
  opts.allow_empty_labels = true;
  const Dataset test = read_dataset(*config.test_path, opts);
  if (test.n_categories() > model.n_categories()) {
    throw DataError(config.test_path->string() + " has more categories than the model");
  }
  const Dataset aligned = with_dims(test, test.n_terms(), model.n_categories());

  std::map<std::string, std::string> files;
  const CombinerConfig cc{Mode::M2, model.epsilon_clamp, config.force_nonempty};
  for (Mode mode : config.modes) {
    const Prediction pred = predict_all(model, aligned, mode);
    const auto sets = binarize(pred.final_scores, cc);
    const std::string name(to_string(mode));
    files["predictions_" + name + ".txt"] = serialize_predictions(sets, pred.final_scores);
    files["scores_" + name + ".csv"] = scores_to_csv(pred.final_scores);
  }
  std::filesystem::create_directories(config.out_dir);
  for (const auto& [name, text] : files) write_text_file(config.out_dir / name, text);
}

Json run_evaluate(const std::filesystem::path& truth, const std::filesystem::path& predictions,
                  bool allow_empty_labels, bool with_one_error) {
  ParseOptions opts;
  opts.allow_empty_labels = allow_empty_labels;
  const Dataset ds = read_dataset(truth, opts);
  const PredictionFile pred = read_predictions(predictions);
  if (pred.scores.rows() != ds.n_docs()) {
    throw DataError("truth has " + std::to_string(ds.n_docs()) + " documents, predictions have " +
                    std::to_string(pred.scores.rows()));
  }
  if (pred.scores.cols() < ds.n_categories()) {
    throw DataError("predictions have fewer score columns than the truth has categories");
  }
  const Index p = pred.scores.cols();
  const std::vector<LabelSet> truth_sets = ds.label_sets();
  if (with_one_error) {
    for (std::size_t i = 0; i < truth_sets.size(); ++i) {
      if (truth_sets[i].empty()) {
        throw DataError(truth.string() + ": one-error undefined, document " + std::to_string(i) +
                        " has an empty true label set");
      }
    }
  }
  const MetricsReport report =
      evaluate(truth_sets, pred.labels, with_one_error ? &pred.scores : nullptr, p);
  return to_json(report);
}

Json run_compare(const std::filesystem::path& truth, const std::filesystem::path& predictions_a,
                 const std::filesystem::path& predictions_b, bool allow_empty_labels) {
  ParseOptions opts;
  opts.allow_empty_labels = allow_empty_labels;
  const Dataset ds = read_dataset(truth, opts);
  const PredictionFile a = read_predictions(predictions_a);
  const PredictionFile b = read_predictions(predictions_b);
  if (a.scores.rows() != ds.n_docs() || b.scores.rows() != ds.n_docs() ||
      a.scores.cols() != b.scores.cols() || a.scores.cols() < ds.n_categories()) {
    throw DataError("truth and prediction files are not aligned");
  }
  const Index p = a.scores.cols();
  const std::vector<LabelSet> truth_sets = ds.label_sets();
  const SignificanceVerdict micro =
      micro_sign_test(decision_matrix(a.labels, p), decision_matrix(b.labels, p),
                      decision_matrix(truth_sets, p));
  const F1Scores fa = f1_scores(contingency(truth_sets, a.labels, p));
  const F1Scores fb = f1_scores(contingency(truth_sets, b.labels, p));
  const SignificanceVerdict macro = macro_s_test(fa.per_category, fb.per_category);
  Json out;
  out["micro_f1_a"] = fa.micro;
  out["micro_f1_b"] = fb.micro;
  out["macro_f1_a"] = fa.macro;
  out["macro_f1_b"] = fb.macro;
  out["micro_sign_test"] = to_json(micro);
  out["macro_s_test"] = to_json(macro);
  return out;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  bool synthesized = false;
  auto [train, test] = load_corpora(config, synthesized);
  TrainConfig tc = config.train;
  tc.mode = Mode::M2;
  const TrainedModel model = train_model(train, tc);

  const Prediction baseline = predict_all(model, test, Mode::Baseline);
  const std::vector<LabelSet> truth = test.label_sets();
  const Index p = test.n_categories();
  const CombinerConfig cc{Mode::M2, model.epsilon_clamp, config.force_nonempty};
  const bool truth_nonempty =
      std::all_of(truth.begin(), truth.end(), [](const LabelSet& s) { return !s.empty(); });

  std::vector<Mode> modes{Mode::Baseline};
  for (Mode m : config.modes) {
    if (std::find(modes.begin(), modes.end(), m) == modes.end()) modes.push_back(m);
  }

  std::map<std::string, std::string> files;
  Json systems = Json::object();
  Json significance = Json::object();
  std::vector<MetricsReport> reports;
  std::vector<std::optional<std::pair<SignificanceVerdict, SignificanceVerdict>>> verdicts;
  const Eigen::MatrixXd truth_matrix = decision_matrix(truth, p);
  std::vector<LabelSet> baseline_sets;

  for (Mode mode : modes) {
    const ScoreMatrix scores = mode == Mode::Baseline
                                   ? baseline.final_scores
                                   : fuse_scores(baseline.base, model.priors, model.label_models,
                                                 mode, model.epsilon_clamp);
    const std::vector<LabelSet> sets = binarize(scores, cc);
    const std::string name(to_string(mode));
    files["predictions_" + name + ".txt"] = serialize_predictions(sets, scores);
    files["scores_" + name + ".csv"] = scores_to_csv(scores);
    const MetricsReport report = evaluate(truth, sets, truth_nonempty ? &scores : nullptr, p);
    systems[name] = to_json(report);
    if (mode == Mode::Baseline) {
      baseline_sets = sets;
      verdicts.emplace_back(std::nullopt);
    } else {
      const SignificanceVerdict micro = micro_sign_test(decision_matrix(sets, p),
                                                        decision_matrix(baseline_sets, p), truth_matrix);
      const SignificanceVerdict macro = macro_s_test(report.per_category_f1, reports.front().per_category_f1);
      significance[name] = Json{{"micro_sign_test", to_json(micro)}, {"macro_s_test", to_json(macro)}};
      verdicts.emplace_back(std::make_pair(micro, macro));
    }
    reports.push_back(report);
  }

  Json metrics;
  metrics["content"] = std::string(to_string(config.train.content.kind));
  metrics["label_clf"] = std::string(to_string(config.train.label.kind));
  metrics["n_train"] = train.n_docs();
  metrics["n_test"] = test.n_docs();
  metrics["n_categories"] = p;
  metrics["systems"] = systems;
  if (!significance.empty()) metrics["significance"] = significance;

  std::ostringstream table;
  table << pad("Model", 22) << pad("muF1", 9) << pad("Delta", 9) << pad("s-test", 8) << pad("MF1", 9)
        << pad("Delta", 9) << "S-test\n";
  const MetricsReport& base_report = reports.front();
  for (std::size_t r = 0; r < modes.size(); ++r) {
    const MetricsReport& rep = reports[r];
    table << pad(mode_label(config, modes[r]), 22) << pad(fixed(rep.micro_f1, 5), 9);
    if (!verdicts[r]) {
      table << pad("--", 9) << pad("--", 8) << pad(fixed(rep.macro_f1, 5), 9) << pad("--", 9) << "--\n";
      continue;
    }
    const auto& [micro, macro] = *verdicts[r];
    table << pad(fixed(delta_percent(rep.micro_f1, base_report.micro_f1), 2) + "%", 9)
          << pad(std::string(symbol_ascii(micro.symbol)), 8) << pad(fixed(rep.macro_f1, 5), 9)
          << pad(fixed(delta_percent(rep.macro_f1, base_report.macro_f1), 2) + "%", 9)
          << symbol_ascii(macro.symbol) << "\n";
  }
  ExperimentResult result{std::move(metrics), table.str()};

  files["metrics.json"] = dump_json(result.metrics);
  files["report.txt"] = result.table;
  if (synthesized) {
    files["train.txt"] = serialize_dataset(train);
    files["test.txt"] = serialize_dataset(test);
  }
  std::filesystem::create_directories(config.out_dir);
  for (const auto& [name, text] : files) write_text_file(config.out_dir / name, text);
  return result;
}

}  // namespace mlabel::cli
