#pragma once

#include "mlabel/combiner.hpp"
#include "mlabel/synthetic.hpp"
#include "mlabel/training.hpp"

#include "json.hpp"

#include <filesystem>
#include <optional>
#include <string>

namespace mlabel::cli {

using Json = nlohmann::ordered_json;

/// Everything one run needs, resolved from a flat JSON document whose keys
/// match the command-line flag names (dashes become underscores).
struct ExperimentConfig {
  std::optional<std::filesystem::path> train_path;
  std::optional<std::filesystem::path> test_path;
  SynthConfig synth;
  TrainConfig train;
  std::vector<Mode> modes{Mode::Baseline, Mode::M1, Mode::M2};
  bool force_nonempty = false;
  bool allow_empty_labels = false;
  std::filesystem::path out_dir = ".";
  std::optional<std::filesystem::path> model_path;
  std::uint64_t seed = 1;
};

/// Throws ConfigError on unknown keys, wrong types, or invalid values.
ExperimentConfig parse_config(const Json& flat);

/// Command results are written only after every output has been computed.
struct SynthResult {
  SyntheticCorpus corpus;
  std::string summary;
};
SynthResult run_synth(const ExperimentConfig& config);

/// Trains and writes the model container to `model` (default out/model.txt).
TrainedModel run_train(const ExperimentConfig& config);

/// Writes predictions_<mode>.txt and scores_<mode>.csv for each mode.
void run_predict(const ExperimentConfig& config);

/// Full report for a truth corpus and a prediction file. One-error is
/// skipped (null) when `with_one_error` is false.
Json run_evaluate(const std::filesystem::path& truth, const std::filesystem::path& predictions,
                  bool allow_empty_labels, bool with_one_error = true);

/// Micro sign test and macro S-test of A against B.
Json run_compare(const std::filesystem::path& truth, const std::filesystem::path& predictions_a,
                 const std::filesystem::path& predictions_b, bool allow_empty_labels);

struct ExperimentResult {
  Json metrics;
  std::string table;
};

/// Trains once, predicts every requested mode, evaluates each against the
/// test truth and compares each fused mode against the baseline. Writes
/// metrics.json, report.txt, scores_<mode>.csv, predictions_<mode>.txt
/// (and train.txt/test.txt for synthesized corpora) into out_dir.
ExperimentResult run_experiment(const ExperimentConfig& config);

/// Percentage change 100 (system - baseline) / baseline.
double delta_percent(double system, double baseline);

}  // namespace mlabel::cli
