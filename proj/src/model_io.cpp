#include "mlabel/model_io.hpp"

#include "mlabel/dataset_io.hpp"

#include <charconv>
#include <memory>
#include <sstream>

namespace mlabel {
namespace {

constexpr std::string_view kMagic = "mlabel-model";
constexpr int kVersion = 1;

class Writer {
 public:
  Writer& word(std::string_view w) {
    sep();
    out_ += w;
    return *this;
  }
  Writer& integer(Index v) { return word(std::to_string(v)); }
  Writer& real(double v) { return word(format_real(v)); }
  Writer& vector(const Eigen::VectorXd& v) {
    integer(v.size());
    for (Index i = 0; i < v.size(); ++i) real(v(i));
    return *this;
  }
  Writer& linear(const LinearModel& m) {
    word("linear").vector(m.weights).real(m.bias);
    if (m.calibration) {
      word("platt").real(m.calibration->a).real(m.calibration->b);
    } else {
      word("sigmoid");
    }
    return *this;
  }
  void end_line() {
    out_ += '\n';
    fresh_ = true;
  }
  std::string take() { return std::move(out_); }

 private:
  void sep() {
    if (!fresh_) out_ += ' ';
    fresh_ = false;
  }
  std::string out_;
  bool fresh_ = true;
};

class Reader {
 public:
  explicit Reader(std::string_view text) : text_(text) {}

  std::string_view word() {
    while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\n')) ++pos_;
    if (pos_ >= text_.size()) throw DataError("model file is truncated");
    const std::size_t start = pos_;
    while (pos_ < text_.size() && text_[pos_] != ' ' && text_[pos_] != '\n') ++pos_;
    return text_.substr(start, pos_ - start);
  }
  void expect(std::string_view w) {
    const std::string_view got = word();
    if (got != w) {
      throw DataError("model file: expected '" + std::string(w) + "', found '" + std::string(got) + "'");
    }
  }
  Index integer() {
    const std::string_view w = word();
    Index v = 0;
    auto [ptr, ec] = std::from_chars(w.data(), w.data() + w.size(), v);
    if (ec != std::errc() || ptr != w.data() + w.size()) {
      throw DataError("model file: malformed integer '" + std::string(w) + "'");
    }
    return v;
  }
  double real() {
    const std::string_view w = word();
    try {
      return parse_real(w);
    } catch (const DataError&) {
      throw DataError("model file: malformed real '" + std::string(w) + "'");
    }
  }
  Index count() {
    const Index n = integer();
    if (n < 0 || static_cast<std::size_t>(n) > text_.size()) throw DataError("model file: bad length");
    return n;
  }
  Eigen::VectorXd vector() {
    Eigen::VectorXd v(count());
    for (Index i = 0; i < v.size(); ++i) v(i) = real();
    return v;
  }
  LinearModel linear() {
    expect("linear");
    LinearModel m;
    m.weights = vector();
    m.bias = real();
    const std::string_view kind = word();
    if (kind == "platt") {
      PlattCalibration c;
      c.a = real();
      c.b = real();
      m.calibration = c;
    } else if (kind != "sigmoid") {
      throw DataError("model file: unknown probability map '" + std::string(kind) + "'");
    }
    return m;
  }
  bool at_end() {
    while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\n')) ++pos_;
    return pos_ >= text_.size();
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string serialize_model(const TrainedModel& model) {
  model.validate();
  Writer w;
  w.word(kMagic).integer(kVersion).end_line();
  w.word("mode").word(to_string(model.mode)).end_line();
  w.word("epsilon").real(model.epsilon_clamp).end_line();
  w.word("content").word(to_string(model.content_kind)).end_line();
  w.word("label").word(to_string(model.label_kind)).end_line();
  w.word("priors").vector(model.priors).end_line();

  const TermRemap& remap = model.pipeline.remap;
  w.word("vocabulary").integer(remap.original_terms).integer(remap.size());
  for (Index t : remap.kept_terms) w.integer(t);
  w.end_line();
  if (model.pipeline.idf) {
    w.word("idf").vector(*model.pipeline.idf).end_line();
  } else {
    w.word("tf").end_line();
  }

  const KNNIndex* written_index = nullptr;
  for (std::size_t j = 0; j < model.content_models.size(); ++j) {
    w.word("content_model").integer(static_cast<Index>(j));
    const ContentModel& cm = model.content_models[j];
    if (const auto* nb = std::get_if<NBModel>(&cm)) {
      w.word("nb").real(nb->alpha).integer(nb->binarize_counts ? 1 : 0);
      w.real(nb->log_prior_pos).real(nb->log_prior_neg);
      w.vector(nb->log_likelihood_pos).vector(nb->log_likelihood_neg);
    } else if (const auto* knn = std::get_if<KNNModel>(&cm)) {
      w.word("knn").integer(knn->category);
      if (knn->index.get() == written_index) {
        w.word("shared");
      } else {
        written_index = knn->index.get();
        const KNNIndex& index = *knn->index;
        w.word("index").integer(index.k()).integer(index.weighted() ? 1 : 0);
        w.integer(index.n_train()).integer(index.n_terms()).integer(index.n_categories());
        w.end_line();
        const auto& vectors = index.vectors();
        for (Index i = 0; i < vectors.rows(); ++i) {
          w.word("row").integer(vectors.outerIndexPtr()[i + 1] - vectors.outerIndexPtr()[i]);
          for (SparseDesign::InnerIterator it(vectors, i); it; ++it) {
            w.integer(it.col()).real(it.value());
          }
          w.end_line();
        }
        for (Index c = 0; c < index.n_categories(); ++c) {
          std::string bits;
          for (char b : index.members(c)) bits += b ? '1' : '0';
          w.word("members").word(bits.empty() ? "-" : bits).end_line();
        }
        w.word("end_index");
      }
    } else {
      w.word("linear_model").linear(std::get<LinearModel>(cm));
    }
    w.end_line();
  }
  for (std::size_t j = 0; j < model.label_models.size(); ++j) {
    w.word("label_model").integer(static_cast<Index>(j)).linear(model.label_models[j]).end_line();
  }
  w.word("end").end_line();
  return w.take();
}

TrainedModel deserialize_model(std::string_view text) {
  Reader r(text);
  r.expect(kMagic);
  if (r.integer() != kVersion) throw DataError("unsupported model file version");

  TrainedModel model;
  r.expect("mode");
  model.mode = parse_mode(r.word());
  r.expect("epsilon");
  model.epsilon_clamp = r.real();
  r.expect("content");
  model.content_kind = parse_content_kind(r.word());
  r.expect("label");
  model.label_kind = parse_label_kind(r.word());
  r.expect("priors");
  model.priors = r.vector();
  const Index p = model.priors.size();

  r.expect("vocabulary");
  model.pipeline.remap.original_terms = r.integer();
  const Index kept = r.count();
  for (Index i = 0; i < kept; ++i) model.pipeline.remap.kept_terms.push_back(r.integer());
  const std::string_view weighting = r.word();
  if (weighting == "idf") {
    model.pipeline.idf = r.vector();
  } else if (weighting != "tf") {
    throw DataError("model file: unknown weighting '" + std::string(weighting) + "'");
  }

  std::shared_ptr<const KNNIndex> index;
  for (Index j = 0; j < p; ++j) {
    r.expect("content_model");
    if (r.integer() != j) throw DataError("model file: content models out of order");
    const std::string_view kind = r.word();
    if (kind == "nb") {
      NBModel nb;
      nb.alpha = r.real();
      nb.binarize_counts = r.integer() != 0;
      nb.log_prior_pos = r.real();
      nb.log_prior_neg = r.real();
      nb.log_likelihood_pos = r.vector();
      nb.log_likelihood_neg = r.vector();
      model.content_models.emplace_back(std::move(nb));
    } else if (kind == "knn") {
      KNNModel knn;
      knn.category = r.integer();
      const std::string_view how = r.word();
      if (how == "index") {
        const Index k = r.integer();
        const bool weighted = r.integer() != 0;
        const Index n = r.count();
        const Index m = r.count();
        const Index cats = r.count();
        std::vector<Eigen::Triplet<double>> triplets;
        for (Index i = 0; i < n; ++i) {
          r.expect("row");
          const Index nnz = r.count();
          for (Index e = 0; e < nnz; ++e) {
            const Index col = r.integer();
            if (col < 0 || col >= m) throw DataError("model file: k-NN term index out of range");
            triplets.emplace_back(i, col, r.real());
          }
        }
        SparseDesign vectors(n, m);
        vectors.setFromTriplets(triplets.begin(), triplets.end());
        std::vector<std::vector<char>> members;
        for (Index c = 0; c < cats; ++c) {
          r.expect("members");
          const std::string_view bits = r.word();
          std::vector<char> row;
          if (bits != "-") {
            for (char b : bits) row.push_back(b == '1' ? 1 : 0);
          }
          members.push_back(std::move(row));
        }
        r.expect("end_index");
        index = std::make_shared<const KNNIndex>(
            KNNIndex::from_parts(std::move(vectors), std::move(members), k, weighted));
      } else if (how != "shared" || !index) {
        throw DataError("model file: k-NN model without an index");
      }
      knn.index = index;
      model.content_models.emplace_back(std::move(knn));
    } else if (kind == "linear_model") {
      model.content_models.emplace_back(r.linear());
    } else {
      throw DataError("model file: unknown content model '" + std::string(kind) + "'");
    }
  }
  for (Index j = 0; j < p; ++j) {
    r.expect("label_model");
    if (r.integer() != j) throw DataError("model file: label models out of order");
    model.label_models.push_back(r.linear());
  }
  r.expect("end");
  if (!r.at_end()) throw DataError("model file: trailing content");
  model.validate();
  return model;
}

void save_model(const std::filesystem::path& path, const TrainedModel& model) {
  write_text_file(path, serialize_model(model));
}

TrainedModel load_model(const std::filesystem::path& path) {
  return deserialize_model(read_text_file(path));
}

}  // namespace mlabel
