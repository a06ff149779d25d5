#pragma once

#include <functional>
#include <vector>

#include "qopt/qlinalg.hpp"

namespace qopt {

/// Real-valued function of a quaternion vector, differentiable with respect to
/// the four real components of each entry. When analytic_conj_gradient is
/// empty, derivatives fall back to central finite differences with step
/// h = fd_base_step * max(1, |q|).
struct RealDiffFunction {
  std::function<double(const QVector&)> value;
  std::function<QVector(const QVector&)> analytic_conj_gradient;
  double fd_base_step = 1e-6;
};

/// Stacked real gradient (d/dq_a; d/dq_b; d/dq_c; d/dq_d) of length 4n.
RealVector real_gradient(const RealDiffFunction& f, const QVector& at);

/// Generalized derivative with respect to q^mu (conjugated = false) or to
/// conj(q)^mu (conjugated = true), one quaternion per coordinate. mu != 0.
QVector ghr_derivative(const RealDiffFunction& f, const QVector& at, const Quaternion& mu,
                       bool conjugated);

QVector conj_gradient(const RealDiffFunction& f, const QVector& at);
QVector plain_gradient(const RealDiffFunction& f, const QVector& at);
/// Stacked gradients over the canonical involution family.
AugQuatVector aug_quat_gradient(const RealDiffFunction& f, const QVector& at);
AugQuatVector aug_quat_conj_gradient(const RealDiffFunction& f, const QVector& at);

/// f(q) = 0.5 * || P1 q + P2 q^i + P3 q^j + P4 q^k - y ||^2.
struct WLQuadratic {
  QMatrix p1, p2, p3, p4;  // p x n
  QVector y;               // length p

  std::size_t in_dim() const { return p1.cols(); }
  std::size_t out_dim() const { return p1.rows(); }
};

QVector wl_residual(const WLQuadratic& f, const QVector& q);
double wl_quadratic_value(const WLQuadratic& f, const QVector& q);
/// Closed-form conjugated gradient 0.25*(P1^H r + (P2^H r)^i + (P3^H r)^j + (P4^H r)^k).
QVector wl_quadratic_conj_gradient(const WLQuadratic& f, const QVector& q);
RealDiffFunction as_function(const WLQuadratic& f);

/// Norms of the five equivalent gradient forms, expressed on a common scale so
/// that they agree up to representation-conversion error: the stacked real
/// gradient norm carries a 1/4 factor and the stacked involution forms use the
/// quarter-scaled inner product of their representation.
struct StationarityReport {
  double conj_grad_norm;
  double plain_grad_norm;
  double aug_real_norm_scaled;
  double aug_quat_norm;
  double aug_quat_conj_norm;
  bool stationary;
  double max_norm() const;
};

StationarityReport is_stationary(const RealDiffFunction& f, const QVector& q, double tol);

struct StepRule {
  enum class Kind { constant, backtracking };
  Kind kind = Kind::backtracking;
  double eta0 = 1.0;
  double sufficient_decrease = 1e-4;  // Armijo constant for backtracking

  static StepRule constant(double eta) { return {Kind::constant, eta, 0.0}; }
  static StepRule backtracking(double eta0 = 1.0) { return {Kind::backtracking, eta0, 1e-4}; }
};

struct DescentOptions {
  StepRule step = StepRule::backtracking();
  int max_iter = 1000;
  double tol = 1e-8;
};

struct DescentRecord {
  int iter;
  double objective;
  double grad_norm;
};

struct DescentResult {
  QVector x;
  std::vector<DescentRecord> trace;
  bool converged;
};

/// Steepest descent q <- q - eta * conj_gradient(f, q). Non-convergence within
/// max_iter is reported through the trace, not as an error.
DescentResult gradient_descent(const RealDiffFunction& f, const QVector& q0,
                               const DescentOptions& options);

}  // namespace qopt
