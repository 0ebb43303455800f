#pragma once

#include "mlabel/core.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

namespace mlabel {

struct Dims {
  Index n_terms = 0;
  Index n_categories = 0;
};

struct ParseOptions {
  /// Overrides both the `# dims` header and inference from the data.
  std::optional<Dims> declared_dims;
  /// Accepts the literal `?` as an empty label set.
  bool allow_empty_labels = false;
};

/// Parses the sparse corpus format:
///
///     # comment
///     # dims m=<terms> p=<categories>      (optional header)
///     0,3 1:2 5:1
///     2
///
/// Without declared dims or a header, dims are inferred as max index + 1.
/// Errors are reported as DataError with the 1-based line number.
Dataset parse_dataset(std::string_view text, const ParseOptions& options = {});
Dataset read_dataset(const std::filesystem::path& path, const ParseOptions& options = {});

/// Writes the `# dims` header followed by one line per document. Values use
/// the shortest decimal form that reads back to the same double.
std::string serialize_dataset(const Dataset& ds);

std::string format_labels(const LabelSet& labels);
std::string format_real(double value);
double parse_real(std::string_view token);

std::string read_text_file(const std::filesystem::path& path);
/// Writes to a sibling temporary file and renames it into place.
void write_text_file(const std::filesystem::path& path, std::string_view content);

}  // namespace mlabel
