#pragma once

#include "mlabel/metrics.hpp"
#include "mlabel/significance.hpp"

#include "json.hpp"

#include <filesystem>
#include <string>
#include <string_view>

namespace mlabel {

/// Predicted label sets plus the soft scores behind them.
struct PredictionFile {
  std::vector<LabelSet> labels;
  ScoreMatrix scores;
};

/// One line per document: `LABELS s_0 s_1 ... s_{p-1}`, LABELS as in the
/// dataset format (`?` for an empty set), scores in shortest round-trip form.
std::string serialize_predictions(const std::vector<LabelSet>& labels, const ScoreMatrix& scores);
PredictionFile parse_predictions(std::string_view text);
PredictionFile read_predictions(const std::filesystem::path& path);

/// One row per document, p columns, 9 significant digits.
std::string scores_to_csv(const ScoreMatrix& scores);

nlohmann::ordered_json to_json(const MetricsReport& report);
nlohmann::ordered_json to_json(const SignificanceVerdict& verdict);

/// Indented JSON text with a trailing newline.
std::string dump_json(const nlohmann::ordered_json& value);

}  // namespace mlabel
