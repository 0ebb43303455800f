#include "doctest.h"
#include "test_support.hpp"

#include "mlabel/combiner.hpp"
#include "mlabel/synthetic.hpp"
#include "mlabel/training.hpp"

#include <cmath>

using namespace mlabel;
using mlabel::testing::doc;

namespace {

// Same fusion, written independently in odds form.
double odds_oracle(double p_cx, double p_cl, double prior) {
  const double odds = (p_cx / (1 - p_cx)) * (p_cl / (1 - p_cl)) / (prior / (1 - prior));
  return odds / (1 + odds);
}

}  // namespace

TEST_CASE("estimate_priors is Laplace smoothed") {
  std::vector<SparseDocument> docs;
  for (Index i = 0; i < 10; ++i) {
    LabelSet labels{2};
    if (i < 3) labels.insert(labels.begin(), 0);
    docs.push_back(doc(i, {}, labels));
  }
  const Eigen::VectorXd priors = estimate_priors(Dataset(1, 3, docs));
  CHECK(priors(0) == doctest::Approx(4.0 / 12.0).epsilon(1e-15));
  CHECK(priors(1) == doctest::Approx(1.0 / 12.0).epsilon(1e-15));
  CHECK(priors(2) == doctest::Approx(11.0 / 12.0).epsilon(1e-15));
}

TEST_CASE("M1 context thresholds inclusively at one half") {
  CHECK(context_m1(Eigen::Vector3d(0.7, 0.4, 0.5), 1).values() == Eigen::Vector2d(1.0, 1.0));
  CHECK(context_m1(Eigen::Vector3d::Zero(), 0).values() == Eigen::Vector2d::Zero());
  CHECK(context_m1(Eigen::Vector2d(0.9, 0.49), 0).values() == Eigen::VectorXd::Zero(1));
}

TEST_CASE("M2 context copies the other scores") {
  CHECK(context_m2(Eigen::Vector3d(0.7, 0.4, 0.5), 1).values() == Eigen::Vector2d(0.7, 0.5));
  CHECK(context_m2(Eigen::Vector3d(0.7, 0.4, 0.5), 0).values() == Eigen::Vector2d(0.4, 0.5));
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    Eigen::VectorXd row(5);
    for (Index k = 0; k < 5; ++k) row(k) = unit(rng);
    const Index j = trial % 5;
    const Eigen::VectorXd soft = context_m2(row, j).values();
    const Eigen::VectorXd hard = context_m1(row, j).values();
    for (Index k = 0; k < 4; ++k) CHECK(hard(k) == (soft(k) >= 0.5 ? 1.0 : 0.0));
  }
}

TEST_CASE("combine_posterior worked values") {
  CHECK(combine_posterior(0.7, 0.3, 0.3) == doctest::Approx(0.7).epsilon(1e-14));
  CHECK(combine_posterior(0.5, 0.5, 0.5) == 0.5);
  CHECK(std::abs(combine_posterior(0.8, 0.6, 0.5) - 0.96 / 1.12) < 1e-15);
  // Saturated inputs are clamped, never NaN.
  const double extreme = combine_posterior(1.0, 0.0, 1.0);
  CHECK(std::isfinite(extreme));
  CHECK(extreme > 0.0);
  CHECK(extreme < 1.0);
  CHECK(combine_posterior(0.8f, 0.6f, 0.5f) == doctest::Approx(0.857142f));
}

TEST_CASE("combine_posterior agrees with the odds-form oracle") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> unit(0.01, 0.99);
  for (int trial = 0; trial < 10000; ++trial) {
    const double a = unit(rng), b = unit(rng), c = unit(rng);
    CHECK(std::abs(combine_posterior(a, b, c) - odds_oracle(a, b, c)) < 1e-12);
  }
}

TEST_CASE("combine_posterior complement and monotonicity") {
  std::mt19937_64 rng(32);
  std::uniform_real_distribution<double> unit(1e-6, 1 - 1e-6);
  for (int trial = 0; trial < 10000; ++trial) {
    const double a = unit(rng), b = unit(rng), c = unit(rng);
    CHECK(std::abs(combine_posterior(a, b, c) + combine_posterior(1 - a, 1 - b, 1 - c) - 1.0) < 1e-12);
    const double a2 = std::min(a + 0.01, 0.99), b2 = std::min(b + 0.01, 0.99);
    if (a2 > a) CHECK(combine_posterior(a2, b, c) > combine_posterior(a, b, c));
    if (b2 > b) CHECK(combine_posterior(a, b2, c) > combine_posterior(a, b, c));
  }
}

TEST_CASE("binarize thresholds and optional fallback") {
  Eigen::MatrixXd s(3, 2);
  s << 0.7, 0.2, 0.2, 0.3, 0.5, 0.5;
  const ScoreMatrix scores(s);
  const auto plain = binarize(scores, {});
  CHECK(plain[0] == LabelSet{0});
  CHECK(plain[1].empty());
  CHECK(plain[2] == LabelSet{0, 1});
  CombinerConfig forced;
  forced.force_nonempty = true;
  CHECK(binarize(scores, forced)[1] == LabelSet{1});
  Eigen::MatrixXd tie(1, 2);
  tie << 0.1, 0.1;
  CHECK(binarize(ScoreMatrix(tie), forced)[0] == LabelSet{0});
}

TEST_CASE("CombinerConfig validation") {
  CombinerConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.epsilon_clamp = 0.5;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg.epsilon_clamp = 0.0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("fuse_scores: baseline identity and uninformative collapse") {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Eigen::MatrixXd raw(20, 4);
  for (Index i = 0; i < raw.size(); ++i) raw.data()[i] = unit(rng);
  const ScoreMatrix base(raw);
  const Eigen::VectorXd priors = Eigen::VectorXd::Constant(4, 0.5);
  std::vector<LabelModel> flat(4);
  for (auto& m : flat) m.weights = Eigen::VectorXd::Zero(3);

  CHECK(fuse_scores(base, priors, flat, Mode::Baseline, 1e-6).matrix() == raw);
  for (Mode mode : {Mode::M1, Mode::M2}) {
    const ScoreMatrix fused = fuse_scores(base, priors, flat, mode, 1e-6);
    const Eigen::MatrixXd clamped = raw.array().max(1e-6).min(1 - 1e-6).matrix();
    CHECK((fused.matrix() - clamped).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("M1 and M2 agree on hard base scores") {
  std::mt19937_64 rng(7);
  const Dataset train = mlabel::testing::random_dataset(rng, 60, 5, 4);
  const TrainedModel model = train_model(train, {});
  std::bernoulli_distribution coin(0.5);
  Eigen::MatrixXd hard(15, 4);
  for (Index i = 0; i < hard.size(); ++i) hard.data()[i] = coin(rng) ? 1.0 : 0.0;
  const ScoreMatrix base(hard);
  const ScoreMatrix m1 = fuse_scores(base, model.priors, model.label_models, Mode::M1, 1e-6);
  const ScoreMatrix m2 = fuse_scores(base, model.priors, model.label_models, Mode::M2, 1e-6);
  CHECK(m1.matrix() == m2.matrix());
}

TEST_CASE("predict_all leaves the base scores untouched") {
  std::mt19937_64 rng(8);
  const Dataset train = mlabel::testing::random_dataset(rng, 80, 12, 3);
  const Dataset test = mlabel::testing::random_dataset(rng, 20, 12, 3);
  TrainConfig cfg;
  const TrainedModel model = train_model(train, cfg);
  const Prediction baseline = predict_all(model, test, Mode::Baseline);
  CHECK(baseline.final_scores.matrix() == baseline.base.matrix());
  for (Mode mode : {Mode::M1, Mode::M2}) {
    const Prediction p = predict_all(model, test, mode);
    CHECK(p.base.matrix() == baseline.base.matrix());
    CHECK(p.final_scores.matrix() ==
          fuse_scores(p.base, model.priors, model.label_models, mode, model.epsilon_clamp).matrix());
  }
  const Dataset wrong(12, 4, {doc(0, {}, {0})});
  CHECK_THROWS_AS(predict_all(model, wrong), DataError);
}

TEST_CASE("an exclusion corpus suppresses the excluded partner") {
  SynthConfig cfg;
  cfg.n_train = 1000;
  cfg.n_test = 1;
  cfg.n_categories = 2;
  cfg.vocab_size = 10;
  cfg.words_per_doc = 3;
  cfg.base_label_probs = {0.6, 0.6};
  cfg.exclusion_pairs = {{0, 1}};
  const TrainedModel model = train_model(generate_synthetic(cfg).train, {});
  Eigen::MatrixXd row(1, 2);
  row << 0.9, 0.55;
  const ScoreMatrix fused = fuse_scores(ScoreMatrix(row), model.priors, model.label_models, Mode::M2, 1e-6);
  CHECK(fused(0, 1) < 0.5);
  CHECK(fused(0, 0) > 0.5);
}
