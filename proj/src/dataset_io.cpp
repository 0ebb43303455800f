#include "mlabel/dataset_io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

namespace mlabel {
namespace {

DataError line_error(std::size_t line, const std::string& what) {
  return DataError("line " + std::to_string(line) + ": " + what);
}

Index parse_index(std::string_view token, std::size_t line, const char* what) {
  Index value = 0;
  const auto* end = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(token.data(), end, value);
  if (token.empty() || ec != std::errc() || ptr != end || value < 0) {
    throw line_error(line, std::string("malformed ") + what + " '" + std::string(token) + "'");
  }
  return value;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = text.find(sep, start);
    parts.push_back(text.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

// "# dims m=500 p=8"
std::optional<Dims> parse_dims_header(std::string_view line) {
  std::istringstream in{std::string(line)};
  std::string hash, tag, m, p;
  if (!(in >> hash >> tag >> m >> p) || hash != "#" || tag != "dims") return std::nullopt;
  if (m.rfind("m=", 0) != 0 || p.rfind("p=", 0) != 0) return std::nullopt;
  try {
    return Dims{std::stoll(m.substr(2)), std::stoll(p.substr(2))};
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

struct ParsedLine {
  std::size_t line;
  std::vector<Feature> features;
  LabelSet labels;
};

}  // namespace

double parse_real(std::string_view token) {
  double value = 0.0;
  const auto* end = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(token.data(), end, value);
  if (token.empty() || ec != std::errc() || ptr != end) {
    throw DataError("malformed real '" + std::string(token) + "'");
  }
  return value;
}

std::string format_real(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

std::string format_labels(const LabelSet& labels) {
  if (labels.empty()) return "?";
  std::string out;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (i > 0) out += ',';
    out += std::to_string(labels[i]);
  }
  return out;
}

Dataset parse_dataset(std::string_view text, const ParseOptions& options) {
  std::vector<ParsedLine> rows;
  std::optional<Dims> header;
  Index max_term = -1;
  Index max_label = -1;

  std::size_t line_no = 0;
  for (std::string_view line : split(text, '\n')) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (line.front() == '#') {
      if (!header) header = parse_dims_header(line);
      continue;
    }
    const std::size_t sp = line.find(' ');
    const std::string_view label_field = line.substr(0, sp);
    const std::string_view feature_field =
        sp == std::string_view::npos ? std::string_view{} : line.substr(sp + 1);

    ParsedLine row{line_no, {}, {}};
    if (label_field == "?") {
      if (!options.allow_empty_labels) throw line_error(line_no, "empty label set '?' not allowed");
    } else {
      for (std::string_view tok : split(label_field, ',')) {
        row.labels.push_back(parse_index(tok, line_no, "label"));
      }
    }
    if (!feature_field.empty()) {
      for (std::string_view tok : split(feature_field, ' ')) {
        const std::size_t colon = tok.find(':');
        if (colon == std::string_view::npos) {
          throw line_error(line_no, "malformed feature '" + std::string(tok) + "'");
        }
        Feature f;
        f.term = parse_index(tok.substr(0, colon), line_no, "term index");
        try {
          f.value = parse_real(tok.substr(colon + 1));
        } catch (const DataError& e) {
          throw line_error(line_no, e.what());
        }
        row.features.push_back(f);
      }
    }
    for (std::size_t i = 1; i < row.features.size(); ++i) {
      if (row.features[i].term == row.features[i - 1].term) {
        throw line_error(line_no, "duplicate term index " + std::to_string(row.features[i].term));
      }
      if (row.features[i].term < row.features[i - 1].term) {
        throw line_error(line_no, "unsorted term index " + std::to_string(row.features[i].term));
      }
    }
    if (!row.features.empty()) max_term = std::max(max_term, row.features.back().term);
    for (Index l : row.labels) max_label = std::max(max_label, l);
    rows.push_back(std::move(row));
  }

  Dims dims{max_term + 1, max_label + 1};
  if (options.declared_dims) {
    dims = *options.declared_dims;
  } else if (header) {
    dims = *header;
  }
  if (dims.n_categories < 1) throw DataError("dataset has no categories");

  std::vector<SparseDocument> docs;
  docs.reserve(rows.size());
  for (auto& row : rows) {
    for (Index l : row.labels) {
      if (l >= dims.n_categories) {
        throw line_error(row.line, "label index " + std::to_string(l) + " >= " +
                                       std::to_string(dims.n_categories));
      }
    }
    if (!row.features.empty() && row.features.back().term >= dims.n_terms) {
      throw line_error(row.line, "term index " + std::to_string(row.features.back().term) +
                                     " >= " + std::to_string(dims.n_terms));
    }
    try {
      docs.emplace_back(static_cast<Index>(docs.size()), std::move(row.features),
                        std::move(row.labels));
    } catch (const DataError& e) {
      throw line_error(row.line, e.what());
    }
  }
  return Dataset(dims.n_terms, dims.n_categories, std::move(docs));
}

Dataset read_dataset(const std::filesystem::path& path, const ParseOptions& options) {
  try {
    return parse_dataset(read_text_file(path), options);
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

std::string serialize_dataset(const Dataset& ds) {
  std::string out = "# dims m=" + std::to_string(ds.n_terms()) +
                    " p=" + std::to_string(ds.n_categories()) + "\n";
  for (const auto& doc : ds.documents()) {
    out += format_labels(doc.labels());
    out += ' ';
    bool first = true;
    for (const Feature& f : doc.features()) {
      if (!first) out += ' ';
      first = false;
      out += std::to_string(f.term);
      out += ':';
      out += format_real(f.value);
    }
    out += '\n';
  }
  return out;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view content) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write " + path.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw ConfigError("cannot write " + path.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw ConfigError("cannot write " + path.string() + ": " + ec.message());
}

}  // namespace mlabel
