#pragma once

#include "mlabel/core.hpp"

#include <Eigen/SparseCore>

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <type_traits>
#include <vector>

namespace mlabel {

using SparseDesign = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// Sigmoid map P(pos | s) = 1 / (1 + exp(a s + b)).
struct PlattCalibration {
  double a = 0.0;
  double b = 0.0;

  friend bool operator==(const PlattCalibration&, const PlattCalibration&) = default;
};

/// Linear scorer s = w.x + bias. Without calibration the probability is the
/// logistic sigmoid of s; with calibration it is the Platt map of s.
struct LinearModel {
  Eigen::VectorXd weights;
  double bias = 0.0;
  std::optional<PlattCalibration> calibration;

  Index dim() const { return weights.size(); }
  double probability(double score) const;
};

template <typename Scalar>
Scalar sigmoid(Scalar z) {
  if (z >= Scalar(0)) return Scalar(1) / (Scalar(1) + std::exp(-z));
  const Scalar e = std::exp(z);
  return e / (Scalar(1) + e);
}

/// log(1 + exp(z)) without overflow.
template <typename Scalar>
Scalar softplus(Scalar z) {
  return z > Scalar(0) ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

double decision_value(const LinearModel& model, const SparseDocument& doc);
double decision_value(const LinearModel& model, const Eigen::Ref<const Eigen::VectorXd>& x);
double predict_proba(const LinearModel& model, const SparseDocument& doc);
double predict_proba(const LinearModel& model, const Eigen::Ref<const Eigen::VectorXd>& x);

SparseDesign design_matrix(const Dataset& ds);
/// 1.0 for documents in `category`, 0.0 otherwise.
Eigen::VectorXd category_targets(const Dataset& ds, Index category);

namespace detail {

inline double row_dot(const Eigen::MatrixXd& x, Index i, const Eigen::VectorXd& w) {
  return x.row(i).dot(w);
}
inline double row_dot(const SparseDesign& x, Index i, const Eigen::VectorXd& w) {
  double s = 0.0;
  for (SparseDesign::InnerIterator it(x, i); it; ++it) s += it.value() * w(it.col());
  return s;
}
inline void row_axpy(const Eigen::MatrixXd& x, Index i, double a, Eigen::VectorXd& w) {
  w.noalias() += a * x.row(i).transpose();
}
inline void row_axpy(const SparseDesign& x, Index i, double a, Eigen::VectorXd& w) {
  for (SparseDesign::InnerIterator it(x, i); it; ++it) w(it.col()) += a * it.value();
}
inline double row_squared_norm(const Eigen::MatrixXd& x, Index i) { return x.row(i).squaredNorm(); }
inline double row_squared_norm(const SparseDesign& x, Index i) {
  double s = 0.0;
  for (SparseDesign::InnerIterator it(x, i); it; ++it) s += it.value() * it.value();
  return s;
}
inline Eigen::MatrixXd select_rows(const Eigen::MatrixXd& x, const std::vector<Index>& rows) {
  return x(rows, Eigen::all);
}
SparseDesign select_rows(const SparseDesign& x, const std::vector<Index>& rows);

template <typename Design>
void check_problem(const Design& x, const Eigen::VectorXd& targets) {
  if (x.rows() < 1) throw DataError("training requires at least one example");
  if (targets.size() != x.rows()) throw DataError("target count does not match example count");
  for (Index i = 0; i < targets.size(); ++i) {
    if (targets(i) != 0.0 && targets(i) != 1.0) throw DataError("targets must be 0 or 1");
  }
  if constexpr (std::is_same_v<Design, SparseDesign>) {
    for (Index k = 0; k < x.nonZeros(); ++k) {
      if (!std::isfinite(x.valuePtr()[k])) throw DataError("non-finite input value");
    }
  } else {
    if (!x.allFinite()) throw DataError("non-finite input value");
  }
}

}  // namespace detail

/// Penalized logistic loss over theta = (w, bias):
///   sum_i log(1 + exp(-y_i (w.x_i + bias))) + lambda/2 |w|^2,  y_i in {-1,+1}.
/// The bias is not penalized.
template <typename Design>
class LogisticObjective {
 public:
  LogisticObjective(const Design& x, const Eigen::VectorXd& targets, double lambda)
      : x_(x), signs_(2.0 * targets.array() - 1.0), lambda_(lambda) {}

  Index dim() const { return x_.cols() + 1; }

  Eigen::VectorXd margins(const Eigen::VectorXd& theta) const {
    Eigen::VectorXd z = x_ * theta.head(x_.cols());
    z.array() += theta(x_.cols());
    return z;
  }

  double value(const Eigen::VectorXd& theta) const {
    const Eigen::VectorXd z = margins(theta);
    double f = 0.0;
    for (Index i = 0; i < z.size(); ++i) f += softplus(-signs_(i) * z(i));
    return f + 0.5 * lambda_ * theta.head(x_.cols()).squaredNorm();
  }

  Eigen::VectorXd gradient(const Eigen::VectorXd& theta) const {
    const Eigen::VectorXd z = margins(theta);
    Eigen::VectorXd r(z.size());
    for (Index i = 0; i < z.size(); ++i) r(i) = -signs_(i) * sigmoid(-signs_(i) * z(i));
    Eigen::VectorXd g(dim());
    g.head(x_.cols()) = x_.transpose() * r + lambda_ * theta.head(x_.cols());
    g(x_.cols()) = r.sum();
    return g;
  }

  /// Diagonal weights sigma(z)(1 - sigma(z)) of the Hessian at theta.
  Eigen::VectorXd curvature(const Eigen::VectorXd& theta) const {
    const Eigen::VectorXd z = margins(theta);
    Eigen::VectorXd d(z.size());
    for (Index i = 0; i < z.size(); ++i) {
      const double s = sigmoid(z(i));
      d(i) = s * (1.0 - s);
    }
    return d;
  }

  Eigen::VectorXd hessian_times(const Eigen::VectorXd& curv, const Eigen::VectorXd& v) const {
    Eigen::VectorXd u = x_ * v.head(x_.cols());
    u.array() += v(x_.cols());
    u.array() *= curv.array();
    Eigen::VectorXd out(dim());
    out.head(x_.cols()) = x_.transpose() * u + lambda_ * v.head(x_.cols());
    out(x_.cols()) = u.sum();
    return out;
  }

 private:
  const Design& x_;
  Eigen::VectorXd signs_;
  double lambda_;
};

struct LogRegOptions {
  double lambda = 1.0;
  double gradient_tolerance = 1e-6;
  int max_iterations = 1000;
};

/// Inexact Newton with conjugate-gradient directions and Armijo
/// backtracking, started from zero. Stops when |grad| <= tolerance, after
/// max_iterations, or when no step decreases the objective.
template <typename Design>
LinearModel train_logreg(const Design& x, const Eigen::VectorXd& targets,
                         const LogRegOptions& options = {}) {
  detail::check_problem(x, targets);
  if (!(options.lambda >= 0.0) || !std::isfinite(options.lambda)) {
    throw ConfigError("logistic regression lambda must be non-negative");
  }
  const LogisticObjective<Design> objective(x, targets, options.lambda);
  const Index d = objective.dim();
  Eigen::VectorXd theta = Eigen::VectorXd::Zero(d);
  double f = objective.value(theta);

  for (int iter = 0; iter < options.max_iterations; ++iter) {
    const Eigen::VectorXd g = objective.gradient(theta);
    const double gnorm = g.norm();
    if (gnorm <= options.gradient_tolerance) break;

    // CG on H step = -g.
    const Eigen::VectorXd curv = objective.curvature(theta);
    Eigen::VectorXd step = Eigen::VectorXd::Zero(d);
    Eigen::VectorXd r = -g;
    Eigen::VectorXd dir = r;
    double rr = r.squaredNorm();
    const double cg_tol = std::min(0.1, std::sqrt(gnorm)) * gnorm;
    for (Index k = 0; k < 2 * d + 10; ++k) {
      const Eigen::VectorXd hd = objective.hessian_times(curv, dir);
      const double curvature = dir.dot(hd);
      if (!(curvature > 1e-14 * dir.squaredNorm())) {
        if (k == 0) step = -g;
        break;
      }
      const double alpha = rr / curvature;
      step += alpha * dir;
      r -= alpha * hd;
      const double rr_next = r.squaredNorm();
      if (std::sqrt(rr_next) <= cg_tol) break;
      dir = r + (rr_next / rr) * dir;
      rr = rr_next;
    }

    double slope = g.dot(step);
    if (!(slope < 0.0)) {
      step = -g;
      slope = -gnorm * gnorm;
    }
    double t = 1.0;
    bool moved = false;
    for (int ls = 0; ls < 60; ++ls) {
      const Eigen::VectorXd candidate = theta + t * step;
      const double fc = objective.value(candidate);
      if (fc <= f + 1e-4 * t * slope) {
        theta = candidate;
        f = fc;
        moved = true;
        break;
      }
      t *= 0.5;
    }
    if (!moved) break;
  }

  LinearModel model;
  model.weights = theta.head(x.cols());
  model.bias = theta(x.cols());
  return model;
}

struct SvmOptions {
  double C = 1.0;
  double tolerance = 1e-3;
  int max_passes = 1000;
};

/// L2-regularized hinge loss, 1/2 |w|^2 + C sum_i max(0, 1 - y_i w.x_i),
/// with the bias folded in as a constant feature, solved by dual coordinate
/// descent with a fixed sweep order. Stops when the projected-gradient
/// spread drops below the tolerance.
template <typename Design>
LinearModel train_linear_svm(const Design& x, const Eigen::VectorXd& targets,
                             const SvmOptions& options = {}) {
  detail::check_problem(x, targets);
  if (!(options.C > 0.0) || !std::isfinite(options.C)) throw ConfigError("SVM C must be positive");
  const Index n = x.rows();
  const double upper = options.C;
  Eigen::VectorXd w = Eigen::VectorXd::Zero(x.cols());
  double bias = 0.0;
  Eigen::VectorXd alpha = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd diag(n);
  for (Index i = 0; i < n; ++i) diag(i) = detail::row_squared_norm(x, i) + 1.0;

  for (int pass = 0; pass < options.max_passes; ++pass) {
    double pg_max = -std::numeric_limits<double>::infinity();
    double pg_min = std::numeric_limits<double>::infinity();
    for (Index i = 0; i < n; ++i) {
      const double y = targets(i) > 0.5 ? 1.0 : -1.0;
      const double grad = y * (detail::row_dot(x, i, w) + bias) - 1.0;
      double pg = grad;
      if (alpha(i) <= 0.0) {
        pg = std::min(grad, 0.0);
      } else if (alpha(i) >= upper) {
        pg = std::max(grad, 0.0);
      }
      pg_max = std::max(pg_max, pg);
      pg_min = std::min(pg_min, pg);
      if (std::abs(pg) > 1e-12) {
        const double old = alpha(i);
        alpha(i) = std::clamp(old - grad / diag(i), 0.0, upper);
        const double delta = (alpha(i) - old) * y;
        detail::row_axpy(x, i, delta, w);
        bias += delta;
      }
    }
    if (pg_max - pg_min <= options.tolerance) break;
  }

  LinearModel model;
  model.weights = std::move(w);
  model.bias = bias;
  return model;
}

struct PlattTargets {
  double positive = 0.0;
  double negative = 0.0;
};

/// Smoothed targets (N+ + 1)/(N+ + 2) and 1/(N- + 2).
PlattTargets platt_targets(Index n_pos, Index n_neg);

/// Regularized maximum-likelihood fit of P(pos|s) = 1/(1 + exp(a s + b)) by
/// Newton's method with backtracking. When every score is equal the fit
/// reduces to a = 0 and the smoothed base rate.
PlattCalibration fit_platt(std::span<const double> scores, std::span<const double> targets,
                           double gradient_tolerance = 1e-8);

/// Linear SVM with Platt calibration. folds < 2 fits the sigmoid on
/// in-sample scores; otherwise on held-out scores from a deterministic
/// round-robin split (example i goes to fold i % folds).
template <typename Design>
LinearModel train_svm_platt(const Design& x, const Eigen::VectorXd& targets,
                            const SvmOptions& options = {}, int folds = 0) {
  LinearModel model = train_linear_svm(x, targets, options);
  Eigen::VectorXd scores(x.rows());
  if (folds < 2 || x.rows() < folds) {
    scores = x * model.weights;
    scores.array() += model.bias;
  } else {
    for (int fold = 0; fold < folds; ++fold) {
      std::vector<Index> train_rows, held_rows;
      for (Index i = 0; i < x.rows(); ++i) (i % folds == fold ? held_rows : train_rows).push_back(i);
      const auto sub = detail::select_rows(x, train_rows);
      const LinearModel partial = train_linear_svm(sub, targets(train_rows).eval(), options);
      for (Index i : held_rows) scores(i) = detail::row_dot(x, i, partial.weights) + partial.bias;
    }
  }
  model.calibration = fit_platt(std::span<const double>(scores.data(), scores.size()),
                                std::span<const double>(targets.data(), targets.size()));
  return model;
}

}  // namespace mlabel
