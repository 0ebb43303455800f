#include "doctest.h"
#include "test_support.hpp"

#include "mlabel/metrics.hpp"
#include "mlabel/report_io.hpp"
#include "mlabel/significance.hpp"

#include <algorithm>
#include <cmath>

using namespace mlabel;

namespace {

ContingencyTable table_from(std::vector<CategoryCounts> counts) {
  ContingencyTable t;
  t.categories = std::move(counts);
  t.n_docs = t.categories.empty() ? 0
                                  : t.categories[0].tp + t.categories[0].fp + t.categories[0].fn +
                                        t.categories[0].tn;
  return t;
}

// Direct sum of C(n, i) / 2^n for i >= k, via long double Pascal rows.
long double tail_oracle(int n, int k) {
  std::vector<long double> row{1.0L};
  for (int r = 1; r <= n; ++r) {
    std::vector<long double> next(static_cast<std::size_t>(r + 1), 1.0L);
    for (int i = 1; i < r; ++i) next[i] = row[i - 1] + row[i];
    row = std::move(next);
  }
  long double s = 0.0L;
  for (int i = std::max(k, 0); i <= n; ++i) s += row[static_cast<std::size_t>(i)];
  return s / std::pow(2.0L, n);
}

}  // namespace

TEST_CASE("contingency counts") {
  const std::vector<LabelSet> t{{0}}, same{{0}}, other{{1}};
  const ContingencyTable a = contingency(t, same, 2);
  CHECK(a.categories[0] == CategoryCounts{1, 0, 0, 0});
  CHECK(a.categories[1] == CategoryCounts{0, 0, 0, 1});
  const ContingencyTable b = contingency(t, other, 2);
  CHECK(b.categories[0] == CategoryCounts{0, 0, 1, 0});
  CHECK(b.categories[1] == CategoryCounts{0, 1, 0, 0});
  const std::vector<LabelSet> bad{{2}};
  CHECK_THROWS_AS(contingency(t, bad, 2), DataError);
  CHECK_THROWS_AS(contingency(t, std::vector<LabelSet>{}, 2), DataError);
}

TEST_CASE("F1 worked example") {
  const F1Scores f = f1_scores(table_from({{2, 1, 1, 0}, {0, 0, 2, 2}}));
  CHECK(f.per_category[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(f.per_category[1] == 0.0);
  CHECK(f.macro == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(f.micro == 0.5);
}

TEST_CASE("F1 conventions") {
  const F1Scores absent = f1_scores(table_from({{0, 0, 0, 5}}));
  CHECK(absent.per_category[0] == 1.0);
  CHECK(absent.micro == 1.0);
  const std::vector<LabelSet> truth{{0, 1}, {2}, {}};
  const F1Scores perfect = f1_scores(contingency(truth, truth, 3));
  CHECK(perfect.micro == 1.0);
  CHECK(perfect.macro == 1.0);
}

TEST_CASE("Hamming and subset losses") {
  const std::vector<LabelSet> t{{0, 1}}, p{{1, 2}};
  CHECK(hamming_loss(t, p, 5) == doctest::Approx(0.4).epsilon(1e-15));
  CHECK(hamming_loss(t, t, 5) == 0.0);
  const std::vector<LabelSet> all{{0, 1, 2}}, none{{}};
  CHECK(hamming_loss(all, none, 3) == 1.0);

  const std::vector<LabelSet> three{{0}, {1}, {0, 1}}, one_off{{0}, {1}, {0}};
  CHECK(subset_01_loss(three, three) == 0.0);
  CHECK(subset_01_loss(three, one_off) == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("one-error cases") {
  Eigen::MatrixXd s(1, 3);
  s << 0.9, 0.2, 0.8;
  const ScoreMatrix scores(s);
  CHECK(one_error(std::vector<LabelSet>{{2}}, scores) == 1.0);
  CHECK(one_error(std::vector<LabelSet>{{0, 2}}, scores) == 0.0);
  Eigen::MatrixXd tie(1, 2);
  tie << 0.5, 0.5;
  CHECK(one_error(std::vector<LabelSet>{{1}}, ScoreMatrix(tie)) == 1.0);
  CHECK_THROWS_AS(one_error(std::vector<LabelSet>{{}}, scores), DataError);
}

TEST_CASE("metrics agree with a flattened recount") {
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<int> size(1, 10), cats(1, 4);
  std::bernoulli_distribution coin(0.4);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = size(rng), p = cats(rng);
    std::vector<LabelSet> truth(n), pred(n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < p; ++j) {
        if (coin(rng)) truth[i].push_back(j);
        if (coin(rng)) pred[i].push_back(j);
      }
    }
    const MetricsReport r = evaluate(truth, pred, nullptr, p);
    Index tp = 0, fp = 0, fn = 0, wrong_bits = 0, wrong_sets = 0;
    for (int i = 0; i < n; ++i) {
      bool differs = false;
      for (int j = 0; j < p; ++j) {
        const bool t = std::count(truth[i].begin(), truth[i].end(), j) > 0;
        const bool q = std::count(pred[i].begin(), pred[i].end(), j) > 0;
        tp += t && q;
        fp += !t && q;
        fn += t && !q;
        wrong_bits += t != q;
        differs = differs || t != q;
      }
      wrong_sets += differs;
    }
    const double micro = tp + fp + fn == 0 ? 1.0 : 2.0 * tp / (2.0 * tp + fp + fn);
    CHECK(std::abs(r.micro_f1 - micro) <= 1e-12);
    CHECK(std::abs(r.hamming_loss - static_cast<double>(wrong_bits) / (n * p)) <= 1e-12);
    CHECK(std::abs(r.subset_01_loss - static_cast<double>(wrong_sets) / n) <= 1e-12);
    CHECK(r.hamming_loss <= r.subset_01_loss + 1e-15);
    CHECK((r.hamming_loss == 0.0) == (truth == pred));
    for (const CategoryCounts& c : r.table.categories) CHECK(c.tp + c.fp + c.fn + c.tn == n);
  }
}

TEST_CASE("binomial tails") {
  CHECK(binomial_upper_tail(10, 9) == 11.0 / 1024.0);
  CHECK(binomial_upper_tail(8, 8) == 1.0 / 256.0);
  CHECK(binomial_upper_tail(5, 5) == 1.0 / 32.0);
  CHECK(binomial_upper_tail(7, 7) == 1.0 / 128.0);
  CHECK(binomial_upper_tail(4, 0) == 1.0);
  CHECK(binomial_upper_tail(4, 5) == 0.0);
  for (int n = 0; n <= 30; ++n) {
    for (int k = 0; k <= n; ++k) {
      CHECK(static_cast<long double>(binomial_upper_tail(n, k)) ==
            doctest::Approx(static_cast<double>(tail_oracle(n, k))).epsilon(1e-14));
    }
  }
  // The log-space branch stays consistent with the direct sum.
  for (int k : {30, 40, 50, 60, 70, 90}) {
    CHECK(binomial_upper_tail(100, k) == doctest::Approx(static_cast<double>(tail_oracle(100, k))).epsilon(1e-10));
  }
}

TEST_CASE("sign test verdicts") {
  const SignificanceVerdict v = sign_test(SignificanceTest::MicroSign, 10, 9);
  CHECK(v.p_value == 11.0 / 1024.0);
  CHECK(v.symbol == Symbol::Better);
  CHECK(sign_test(SignificanceTest::MicroSign, 8, 8).symbol == Symbol::MuchBetter);
  CHECK(sign_test(SignificanceTest::MacroSign, 5, 5).symbol == Symbol::Better);
  CHECK(sign_test(SignificanceTest::MacroSign, 7, 7).symbol == Symbol::MuchBetter);
  const SignificanceVerdict none = sign_test(SignificanceTest::MicroSign, 0, 0);
  CHECK(none.symbol == Symbol::Similar);
  CHECK(none.p_value == 1.0);
  CHECK(sign_test(SignificanceTest::MicroSign, 6, 3).symbol == Symbol::Similar);
  CHECK_THROWS_AS(sign_test(SignificanceTest::MicroSign, 3, 4), DataError);
}

TEST_CASE("swapping the systems mirrors the verdict") {
  const auto mirror = [](Symbol s) {
    switch (s) {
      case Symbol::MuchBetter: return Symbol::MuchWorse;
      case Symbol::Better: return Symbol::Worse;
      case Symbol::Worse: return Symbol::Better;
      case Symbol::MuchWorse: return Symbol::MuchBetter;
      default: return Symbol::Similar;
    }
  };
  for (int n = 0; n <= 25; ++n) {
    for (int k = 0; k <= n; ++k) {
      const SignificanceVerdict ab = sign_test(SignificanceTest::MicroSign, n, k);
      const SignificanceVerdict ba = sign_test(SignificanceTest::MicroSign, n, n - k);
      CHECK(ab.p_value == ba.p_value);
      CHECK(ba.symbol == mirror(ab.symbol));
    }
  }
}

TEST_CASE("micro sign test counts only decisive disagreements") {
  Eigen::MatrixXd truth(2, 2), a(2, 2), b(2, 2);
  truth << 1, 0, 0, 1;
  a << 1, 0, 0, 0;
  b << 0, 0, 0, 1;
  const SignificanceVerdict v = micro_sign_test(a, b, truth);
  CHECK(v.n_diff == 2);
  CHECK(v.k_wins == 1);
  CHECK(micro_sign_test(a, a, truth).n_diff == 0);
  CHECK_THROWS_AS(micro_sign_test(a, Eigen::MatrixXd(1, 2), truth), DataError);

  // A perfect, B wrong on all 20 decisions.
  Eigen::MatrixXd t20(5, 4);
  t20 << 1, 0, 1, 0, 0, 1, 0, 1, 1, 1, 0, 0, 0, 0, 1, 1, 1, 0, 0, 1;
  const Eigen::MatrixXd wrong = (1.0 - t20.array()).matrix();
  const SignificanceVerdict w = micro_sign_test(t20, wrong, t20);
  CHECK(w.n_diff == 20);
  CHECK(w.k_wins == 20);
  CHECK(w.symbol == Symbol::MuchBetter);
}

TEST_CASE("macro S-test over per-category F1") {
  const std::vector<double> a{0.9, 0.8, 0.7, 0.6, 0.5, 0.4};
  const std::vector<double> b{0.8, 0.7, 0.6, 0.5, 0.4, 0.4};
  const SignificanceVerdict v = macro_s_test(a, b);
  CHECK(v.n_diff == 5);
  CHECK(v.k_wins == 5);
  CHECK(v.p_value == 1.0 / 32.0);
  CHECK(v.symbol == Symbol::Better);
  CHECK(macro_s_test(a, a).symbol == Symbol::Similar);
}

TEST_CASE("symbol spellings") {
  const std::vector<Symbol> all{Symbol::MuchBetter, Symbol::Better, Symbol::Similar, Symbol::Worse,
                                Symbol::MuchWorse};
  std::vector<std::string> ascii, unicode;
  for (Symbol s : all) {
    ascii.emplace_back(symbol_ascii(s));
    unicode.emplace_back(symbol_unicode(s));
  }
  CHECK(ascii == std::vector<std::string>{"<<", "<", "~", ">", ">>"});
  CHECK(unicode == std::vector<std::string>{"≪", "<", "~", ">", "≫"});
}

TEST_CASE("prediction files round-trip") {
  Eigen::MatrixXd s(3, 2);
  s << 0.1, 0.9, 0.123456789012345, 0.5, 1.0, 0.0;
  const ScoreMatrix scores(s);
  const std::vector<LabelSet> labels{{1}, {1}, {}};
  const std::string text = serialize_predictions(labels, scores);
  const PredictionFile back = parse_predictions(text);
  CHECK(back.labels == labels);
  CHECK(back.scores.matrix() == s);
  CHECK(serialize_predictions(back.labels, back.scores) == text);
  CHECK_THROWS_AS(parse_predictions("0 0.5\n1 0.5 0.5\n"), DataError);
  CHECK(scores_to_csv(scores).substr(0, 8) == "0.1,0.9\n");
}

TEST_CASE("metrics JSON carries every field") {
  const std::vector<LabelSet> truth{{0}, {1}}, pred{{0}, {0}};
  Eigen::MatrixXd s(2, 2);
  s << 0.9, 0.1, 0.6, 0.4;
  const ScoreMatrix scores(s);
  const auto j = to_json(evaluate(truth, pred, &scores, 2));
  for (const char* key : {"micro_f1", "macro_f1", "hamming_loss", "subset_01_loss", "one_error",
                          "per_category_f1", "per_category_tp"}) {
    CHECK(j.contains(key));
  }
  CHECK(j["one_error"].get<double>() == 0.5);
  CHECK(to_json(evaluate(truth, pred, nullptr, 2))["one_error"].is_null());
}
