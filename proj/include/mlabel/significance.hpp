#pragma once

#include "mlabel/core.hpp"

#include <span>
#include <string_view>

namespace mlabel {

enum class SignificanceTest { MicroSign, MacroSign };

/// Verdict for "A against B". MuchBetter: A wins with p < 0.01; Better:
/// 0.01 <= p < 0.05; Similar otherwise; Worse and MuchWorse mirror them
/// when B wins.
enum class Symbol { MuchBetter, Better, Similar, Worse, MuchWorse };

std::string_view symbol_unicode(Symbol s);  // ≪ < ~ > ≫
std::string_view symbol_ascii(Symbol s);    // << < ~ > >>
std::string_view to_string(SignificanceTest t);

struct SignificanceVerdict {
  SignificanceTest test = SignificanceTest::MicroSign;
  Index n_diff = 0;
  Index k_wins = 0;
  /// Exact one-sided binomial tail in the direction of the winner.
  double p_value = 1.0;
  Symbol symbol = Symbol::Similar;
};

/// P(X >= k) for X ~ Binomial(n, 1/2). Exact integer sums for n <= 62,
/// log-space summation above.
double binomial_upper_tail(Index n, Index k);

/// Sign test on k wins out of n informative trials.
SignificanceVerdict sign_test(SignificanceTest test, Index n_diff, Index k_wins);

/// Micro sign test over aligned (document x category) decisions: only pairs
/// where the systems disagree count, and k_wins is how often A is right.
/// Inputs are n x p 0/1 matrices.
SignificanceVerdict micro_sign_test(const Eigen::MatrixXd& decisions_a,
                                    const Eigen::MatrixXd& decisions_b,
                                    const Eigen::MatrixXd& truth);

/// Macro sign test over categories whose F1 differs between the systems.
SignificanceVerdict macro_s_test(std::span<const double> f1_a, std::span<const double> f1_b);

/// n x p 0/1 decision matrix from label sets.
Eigen::MatrixXd decision_matrix(std::span<const LabelSet> sets, Index n_categories);

}  // namespace mlabel
