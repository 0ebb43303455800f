#include "mlabel/commands.hpp"
#include "mlabel/dataset_io.hpp"
#include "mlabel/report_io.hpp"

#include "CLI11.hpp"

#include <deque>
#include <functional>
#include <iostream>

namespace {

using mlabel::cli::Json;

// Every config field can be given on the command line. Parsed flags are
// written over the JSON loaded from --config before validation.
class Overrides {
 public:
  void text(CLI::App& app, const std::string& flag, const std::string& key, const std::string& help) {
    auto& slot = strings_.emplace_back();
    CLI::Option* opt = app.add_option(flag, slot, help);
    apply_.push_back([opt, &slot, key](Json& j) {
      if (opt->count() > 0) j[key] = slot;
    });
  }
  void integer(CLI::App& app, const std::string& flag, const std::string& key, const std::string& help) {
    auto& slot = integers_.emplace_back();
    CLI::Option* opt = app.add_option(flag, slot, help);
    apply_.push_back([opt, &slot, key](Json& j) {
      if (opt->count() > 0) j[key] = slot;
    });
  }
  void real(CLI::App& app, const std::string& flag, const std::string& key, const std::string& help) {
    auto& slot = reals_.emplace_back();
    CLI::Option* opt = app.add_option(flag, slot, help);
    apply_.push_back([opt, &slot, key](Json& j) {
      if (opt->count() > 0) j[key] = slot;
    });
  }
  void flag(CLI::App& app, const std::string& flag, const std::string& key, const std::string& help) {
    CLI::Option* opt = app.add_flag(flag, help);
    apply_.push_back([opt, key](Json& j) {
      if (opt->count() > 0) j[key] = true;
    });
  }
  void modes(CLI::App& app) {
    CLI::Option* opt = app.add_option("--mode", modes_, "baseline, m1 or m2 (repeatable)");
    apply_.push_back([opt, this](Json& j) {
      if (opt->count() > 0) j["mode"] = modes_;
    });
  }
  void apply(Json& j) const {
    for (const auto& f : apply_) f(j);
  }

 private:
  std::deque<std::string> strings_;
  std::deque<long long> integers_;
  std::deque<double> reals_;
  std::vector<std::string> modes_;
  std::vector<std::function<void(Json&)>> apply_;
};

struct Subcommand {
  CLI::App* app = nullptr;
  std::string config_path;
  Overrides overrides;
};

void add_model_flags(Subcommand& s) {
  CLI::App& a = *s.app;
  Overrides& o = s.overrides;
  o.modes(a);
  o.text(a, "--content", "content", "content classifier: nb, knn, svm or logreg");
  o.text(a, "--label-clf", "label_clf", "label classifier: logreg or svm");
  o.integer(a, "--min-df", "min_df", "drop terms with document frequency below N");
  o.text(a, "--feat-sel", "feat_sel", "none, ig-sum or chi-max");
  o.integer(a, "--feat-k", "feat_k", "number of terms kept by feature selection");
  o.text(a, "--weighting", "weighting", "tf or tfidf");
  o.real(a, "--alpha", "alpha", "naive Bayes smoothing");
  o.flag(a, "--binarize-counts", "binarize_counts", "naive Bayes on term presence");
  o.integer(a, "--k", "k", "k-NN neighbourhood size");
  o.real(a, "--lambda", "lambda", "L2 penalty of logistic regression");
  o.real(a, "--C", "C", "SVM cost");
  o.real(a, "--label-lambda", "label_lambda", "L2 penalty of the label classifier only");
  o.real(a, "--label-C", "label_C", "SVM cost of the label classifier only");
  o.integer(a, "--platt-folds", "platt_folds", "cross-validated Platt fitting (0 = in-sample)");
  o.real(a, "--epsilon", "epsilon", "probability clamp used by the combiner");
  o.flag(a, "--force-nonempty", "force_nonempty", "predict the top category when none passes 0.5");
}

void add_synth_flags(Subcommand& s) {
  CLI::App& a = *s.app;
  Overrides& o = s.overrides;
  o.integer(a, "--n-train", "n_train", "training documents");
  o.integer(a, "--n-test", "n_test", "test documents");
  o.integer(a, "--p", "p", "number of categories");
  o.integer(a, "--vocab-size", "vocab_size", "vocabulary size");
  o.integer(a, "--words-per-doc", "words_per_doc", "tokens per document");
  o.real(a, "--topic-concentration", "topic_concentration", "Dirichlet concentration of topics");
}

Subcommand& make(std::deque<Subcommand>& subs, CLI::App& root, const std::string& name,
                 const std::string& help) {
  Subcommand& s = subs.emplace_back();
  s.app = root.add_subcommand(name, help);
  s.app->add_option("--config", s.config_path, "flat JSON config file")->check(CLI::ExistingFile);
  s.overrides.text(*s.app, "--out", "out", "output directory");
  s.overrides.integer(*s.app, "--seed", "seed", "random seed");
  s.overrides.flag(*s.app, "--allow-empty-labels", "allow_empty_labels",
                   "accept '?' (empty label set) in corpus files");
  return s;
}

mlabel::cli::ExperimentConfig resolve(const Subcommand& s) {
  Json flat = Json::object();
  if (!s.config_path.empty()) {
    try {
      flat = Json::parse(mlabel::read_text_file(s.config_path));
    } catch (const nlohmann::json::parse_error& e) {
      throw mlabel::ConfigError(s.config_path + ": " + e.what());
    }
    if (!flat.is_object()) throw mlabel::ConfigError(s.config_path + ": expected a JSON object");
  }
  s.overrides.apply(flat);
  return mlabel::cli::parse_config(flat);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App root{"Multi-label text classification with label-dependency context"};
  root.require_subcommand(1);
  std::deque<Subcommand> subs;

  Subcommand& synth = make(subs, root, "synth", "generate a synthetic train/test corpus");
  add_synth_flags(synth);

  Subcommand& train = make(subs, root, "train", "train content and label classifiers");
  train.overrides.text(*train.app, "--train", "train", "training corpus");
  train.overrides.text(*train.app, "--model", "model", "model file to write");
  add_model_flags(train);

  Subcommand& predict = make(subs, root, "predict", "score a corpus with a trained model");
  predict.overrides.text(*predict.app, "--test", "test", "corpus to score");
  predict.overrides.text(*predict.app, "--model", "model", "trained model file");
  predict.overrides.modes(*predict.app);
  predict.overrides.flag(*predict.app, "--force-nonempty", "force_nonempty",
                         "predict the top category when none passes 0.5");

  Subcommand& experiment = make(subs, root, "experiment", "train, predict, evaluate and compare");
  experiment.overrides.text(*experiment.app, "--train", "train", "training corpus");
  experiment.overrides.text(*experiment.app, "--test", "test", "test corpus");
  add_model_flags(experiment);
  add_synth_flags(experiment);

  std::string truth, pred, pred_a, pred_b;
  bool allow_empty = false, no_one_error = false;
  CLI::App* evaluate = root.add_subcommand("evaluate", "metrics of a prediction file as JSON");
  evaluate->add_option("--truth", truth, "corpus with the true labels")->required();
  evaluate->add_option("--pred", pred, "prediction file")->required();
  evaluate->add_flag("--allow-empty-labels", allow_empty, "accept '?' in the truth file");
  evaluate->add_flag("--no-one-error", no_one_error, "skip one-error");
  CLI::App* compare = root.add_subcommand("compare", "sign tests of system A against system B");
  compare->add_option("--truth", truth, "corpus with the true labels")->required();
  compare->add_option("--pred-a", pred_a, "prediction file of system A")->required();
  compare->add_option("--pred-b", pred_b, "prediction file of system B")->required();
  compare->add_flag("--allow-empty-labels", allow_empty, "accept '?' in the truth file");

  try {
    root.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = root.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    namespace cli = mlabel::cli;
    if (synth.app->parsed()) {
      const cli::SynthResult r = cli::run_synth(resolve(synth));
      std::cout << r.summary;
    } else if (train.app->parsed()) {
      cli::run_train(resolve(train));
    } else if (predict.app->parsed()) {
      cli::run_predict(resolve(predict));
    } else if (experiment.app->parsed()) {
      const cli::ExperimentResult r = cli::run_experiment(resolve(experiment));
      std::cout << r.table;
    } else if (evaluate->parsed()) {
      std::cout << mlabel::dump_json(cli::run_evaluate(truth, pred, allow_empty, !no_one_error));
    } else if (compare->parsed()) {
      std::cout << mlabel::dump_json(cli::run_compare(truth, pred_a, pred_b, allow_empty));
    }
  } catch (const mlabel::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const mlabel::DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 3;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
