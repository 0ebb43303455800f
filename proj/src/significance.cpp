#include "mlabel/significance.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

namespace mlabel {

std::string_view symbol_unicode(Symbol s) {
  switch (s) {
    case Symbol::MuchBetter: return "≪";
    case Symbol::Better: return "<";
    case Symbol::Similar: return "~";
    case Symbol::Worse: return ">";
    case Symbol::MuchWorse: return "≫";
  }
  return "~";
}

std::string_view symbol_ascii(Symbol s) {
  switch (s) {
    case Symbol::MuchBetter: return "<<";
    case Symbol::Better: return "<";
    case Symbol::Similar: return "~";
    case Symbol::Worse: return ">";
    case Symbol::MuchWorse: return ">>";
  }
  return "~";
}

std::string_view to_string(SignificanceTest t) {
  return t == SignificanceTest::MicroSign ? "micro_sign_test" : "macro_s_test";
}

double binomial_upper_tail(Index n, Index k) {
  if (n < 0) throw DataError("binomial trial count must be non-negative");
  if (k <= 0) return 1.0;
  if (k > n) return 0.0;
  if (n <= 62) {
    std::uint64_t coeff = 1;  // C(n, i)
    std::uint64_t tail = 0;
    for (Index i = 0; i <= n; ++i) {
      if (i > 0) coeff = coeff * static_cast<std::uint64_t>(n - i + 1) / static_cast<std::uint64_t>(i);
      if (i >= k) tail += coeff;
    }
    return std::ldexp(static_cast<double>(tail), -static_cast<int>(n));
  }
  const double log_n_fact = std::lgamma(static_cast<double>(n) + 1.0);
  const auto log_term = [&](Index i) {
    return log_n_fact - std::lgamma(static_cast<double>(i) + 1.0) -
           std::lgamma(static_cast<double>(n - i) + 1.0) - static_cast<double>(n) * std::log(2.0);
  };
  // Terms decrease away from the mode, so the largest tail term is at
  // max(k, n/2).
  const double hi = log_term(std::max(k, n / 2));
  double sum = 0.0;
  for (Index i = k; i <= n; ++i) sum += std::exp(log_term(i) - hi);
  return std::clamp(std::exp(hi + std::log(sum)), 0.0, 1.0);
}

SignificanceVerdict sign_test(SignificanceTest test, Index n_diff, Index k_wins) {
  if (k_wins < 0 || k_wins > n_diff) throw DataError("sign test needs 0 <= k <= n");
  SignificanceVerdict v;
  v.test = test;
  v.n_diff = n_diff;
  v.k_wins = k_wins;
  if (n_diff == 0) return v;
  const Index losses = n_diff - k_wins;
  const bool a_leads = k_wins >= losses;
  v.p_value = binomial_upper_tail(n_diff, a_leads ? k_wins : losses);
  if (k_wins == losses) {
    v.symbol = Symbol::Similar;
  } else if (v.p_value < 0.01) {
    v.symbol = a_leads ? Symbol::MuchBetter : Symbol::MuchWorse;
  } else if (v.p_value < 0.05) {
    v.symbol = a_leads ? Symbol::Better : Symbol::Worse;
  }
  return v;
}

SignificanceVerdict micro_sign_test(const Eigen::MatrixXd& decisions_a,
                                    const Eigen::MatrixXd& decisions_b,
                                    const Eigen::MatrixXd& truth) {
  if (decisions_a.rows() != truth.rows() || decisions_a.cols() != truth.cols() ||
      decisions_b.rows() != truth.rows() || decisions_b.cols() != truth.cols()) {
    throw DataError("decision matrices are not aligned with the truth");
  }
  Index n_diff = 0, k_wins = 0;
  for (Index i = 0; i < truth.rows(); ++i) {
    for (Index j = 0; j < truth.cols(); ++j) {
      const bool a_right = (decisions_a(i, j) > 0.5) == (truth(i, j) > 0.5);
      const bool b_right = (decisions_b(i, j) > 0.5) == (truth(i, j) > 0.5);
      if (a_right != b_right) {
        ++n_diff;
        if (a_right) ++k_wins;
      }
    }
  }
  return sign_test(SignificanceTest::MicroSign, n_diff, k_wins);
}

SignificanceVerdict macro_s_test(std::span<const double> f1_a, std::span<const double> f1_b) {
  if (f1_a.size() != f1_b.size()) throw DataError("per-category F1 vectors differ in length");
  Index n_diff = 0, k_wins = 0;
  for (std::size_t j = 0; j < f1_a.size(); ++j) {
    if (f1_a[j] != f1_b[j]) {
      ++n_diff;
      if (f1_a[j] > f1_b[j]) ++k_wins;
    }
  }
  return sign_test(SignificanceTest::MacroSign, n_diff, k_wins);
}

Eigen::MatrixXd decision_matrix(std::span<const LabelSet> sets, Index n_categories) {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(static_cast<Index>(sets.size()), n_categories);
  for (std::size_t i = 0; i < sets.size(); ++i) {
    for (Index j : sets[i]) {
      if (j < 0 || j >= n_categories) throw DataError("label index out of range");
      out(static_cast<Index>(i), j) = 1.0;
    }
  }
  return out;
}

}  // namespace mlabel
