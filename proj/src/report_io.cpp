#include "mlabel/report_io.hpp"

#include "mlabel/dataset_io.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>

namespace mlabel {

std::string serialize_predictions(const std::vector<LabelSet>& labels, const ScoreMatrix& scores) {
  if (static_cast<Index>(labels.size()) != scores.rows()) {
    throw DataError("label sets and score rows differ in count");
  }
  std::string out;
  for (Index i = 0; i < scores.rows(); ++i) {
    out += format_labels(labels[static_cast<std::size_t>(i)]);
    for (Index j = 0; j < scores.cols(); ++j) {
      out += ' ';
      out += format_real(scores(i, j));
    }
    out += '\n';
  }
  return out;
}

PredictionFile parse_predictions(std::string_view text) {
  std::vector<LabelSet> labels;
  std::vector<std::vector<double>> rows;
  std::size_t line_no = 0;
  std::size_t width = 0;
  while (!text.empty()) {
    const std::size_t nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;

    std::vector<std::string_view> tokens;
    std::size_t start = 0;
    while (start <= line.size()) {
      const std::size_t sp = line.find(' ', start);
      tokens.push_back(line.substr(start, sp - start));
      if (sp == std::string_view::npos) break;
      start = sp + 1;
    }
    const auto fail = [line_no](const std::string& what) {
      return DataError("line " + std::to_string(line_no) + ": " + what);
    };
    LabelSet set;
    if (tokens.front() != "?") {
      std::string_view field = tokens.front();
      while (true) {
        const std::size_t comma = field.find(',');
        const std::string_view tok = field.substr(0, comma);
        Index v = -1;
        const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (tok.empty() || ec != std::errc() || ptr != tok.data() + tok.size() || v < 0) {
          throw fail("malformed label '" + std::string(tok) + "'");
        }
        set.push_back(v);
        if (comma == std::string_view::npos) break;
        field = field.substr(comma + 1);
      }
      std::sort(set.begin(), set.end());
      if (std::adjacent_find(set.begin(), set.end()) != set.end()) throw fail("duplicate label");
    }
    std::vector<double> row;
    for (std::size_t t = 1; t < tokens.size(); ++t) {
      try {
        row.push_back(parse_real(tokens[t]));
      } catch (const DataError&) {
        throw fail("malformed score '" + std::string(tokens[t]) + "'");
      }
    }
    if (rows.empty()) {
      width = row.size();
      if (width == 0) throw fail("prediction line has no scores");
    } else if (row.size() != width) {
      throw fail("expected " + std::to_string(width) + " scores, found " + std::to_string(row.size()));
    }
    for (Index j : set) {
      if (j >= static_cast<Index>(width)) throw fail("label index " + std::to_string(j) + " out of range");
    }
    labels.push_back(std::move(set));
    rows.push_back(std::move(row));
  }
  Eigen::MatrixXd values(static_cast<Index>(rows.size()), static_cast<Index>(width));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < width; ++j) values(static_cast<Index>(i), static_cast<Index>(j)) = rows[i][j];
  }
  return {std::move(labels), ScoreMatrix(std::move(values))};
}

PredictionFile read_predictions(const std::filesystem::path& path) {
  try {
    return parse_predictions(read_text_file(path));
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

std::string scores_to_csv(const ScoreMatrix& scores) {
  std::string out;
  char buf[32];
  for (Index i = 0; i < scores.rows(); ++i) {
    for (Index j = 0; j < scores.cols(); ++j) {
      if (j > 0) out += ',';
      std::snprintf(buf, sizeof buf, "%.9g", scores(i, j));
      out += buf;
    }
    out += '\n';
  }
  return out;
}

nlohmann::ordered_json to_json(const MetricsReport& report) {
  nlohmann::ordered_json j;
  j["micro_f1"] = report.micro_f1;
  j["macro_f1"] = report.macro_f1;
  j["hamming_loss"] = report.hamming_loss;
  j["subset_01_loss"] = report.subset_01_loss;
  j["one_error"] = report.one_error ? nlohmann::ordered_json(*report.one_error) : nlohmann::ordered_json();
  j["n_docs"] = report.table.n_docs;
  j["per_category_f1"] = report.per_category_f1;
  std::vector<Index> tp, fp, fn, tn;
  for (const CategoryCounts& c : report.table.categories) {
    tp.push_back(c.tp);
    fp.push_back(c.fp);
    fn.push_back(c.fn);
    tn.push_back(c.tn);
  }
  j["per_category_tp"] = tp;
  j["per_category_fp"] = fp;
  j["per_category_fn"] = fn;
  j["per_category_tn"] = tn;
  return j;
}

namespace {

const char* symbol_name(Symbol s) {
  switch (s) {
    case Symbol::MuchBetter: return "much_better";
    case Symbol::Better: return "better";
    case Symbol::Similar: return "similar";
    case Symbol::Worse: return "worse";
    case Symbol::MuchWorse: return "much_worse";
  }
  return "similar";
}

}  // namespace

nlohmann::ordered_json to_json(const SignificanceVerdict& verdict) {
  nlohmann::ordered_json j;
  j["test"] = std::string(to_string(verdict.test));
  j["n_diff"] = verdict.n_diff;
  j["k_wins"] = verdict.k_wins;
  j["p_value"] = verdict.p_value;
  j["symbol"] = std::string(symbol_ascii(verdict.symbol));
  j["verdict"] = symbol_name(verdict.symbol);
  return j;
}

std::string dump_json(const nlohmann::ordered_json& value) { return value.dump(2) + "\n"; }

}  // namespace mlabel
