#pragma once

#include <cstdint>
#include <functional>

#include "qopt/admm.hpp"
#include "qopt/real_linalg.hpp"

namespace qopt {

/// Quaternion l1 norm sum_t |q_t|.
double l1_norm(const QVector& q);

/// Entrywise soft thresholding max(0, 1 - lambda/|q_t|) q_t; the proximal
/// operator of lambda * l1_norm. Entries with |q_t| <= lambda (including 0)
/// map to 0. lambda must be >= 0.
QVector prox_l1(const QVector& q, double lambda);

/// Entrywise clamp of all four components at 0 (Euclidean projection onto the
/// orthant cone of componentwise nonnegative quaternions).
QVector project_nonneg_parts(const QVector& q);

/// Entrywise projection onto the cone q_a >= 0, q_a^2 >= q_b^2 + q_c^2 + q_d^2.
QVector project_soc(const QVector& q);

enum class ConstraintSet { nonneg_parts, soc_cone, custom };

/// minimize 0.5 * || y - P1 q - P2 q^i - P3 q^j - P4 q^k ||^2  s.t.  q in C.
struct WllsProblem {
  QMatrix p1, p2, p3, p4;  // m x n
  QVector y;               // length m
  ConstraintSet cone = ConstraintSet::nonneg_parts;
  std::function<QVector(const QVector&)> custom_projection;

  std::size_t dim() const { return p1.cols(); }
};

enum class WllsSubsolver { explicit_augmented, gradient_descent };

struct WllsOptions {
  WllsSubsolver subsolver = WllsSubsolver::explicit_augmented;
  int inner_iters = 400;    // per-call cap for the gradient-descent subsolver
  double inner_tol = 1e-11; // gradient norm target of the inner solve
};

struct WllsResult {
  QVector solution;  // final projected iterate, feasible by construction
  AdmmState state;
  ConvergenceTrace trace;
  SolveStatus status;
};

/// Splitting solver with projection p-update. The q-update is either the
/// explicit stacked-real normal-equation solve (factored once per call) or a
/// warm-started inner gradient descent with exact line search on the quadratic
/// subproblem.
WllsResult wlls_solve(const WllsProblem& prob, const AdmmConfig& config,
                      const WllsOptions& options = {});

/// minimize 0.5*||y - D q||^2 + beta*||q||_1  s.t.  Re(D q) = 0.
struct BpdnProblem {
  QMatrix d;  // m x n dictionary, typically m < n
  QVector y;  // length m
  double beta = 0.0;
};

/// Exact solver for the constrained q-subproblem
///   minimize 0.5*||y - D q||^2 + (rho/2)*||q - v||^2  s.t.  Re(D q) = 0,
/// with all factorizations done once at construction. The inverse of
/// D^H D + rho I is applied through the low-rank identity
/// (D^H D + rho I)^{-1} = (I - D^H (rho I_m + D D^H)^{-1} D)/rho.
class BpdnQUpdate {
 public:
  BpdnQUpdate(const QMatrix& d, const QVector& y, double rho);

  struct Update {
    QVector q;
    RealVector re_lambda;  // real part of the constraint multiplier
  };
  Update solve(const QVector& v) const;

  /// (D^H D + rho I)^{-1} x.
  QVector apply_inverse(const QVector& x) const;

 private:
  QMatrix d_, dh_;
  double rho_;
  CholeskyFactor gram_;     // stacked-real factor of rho I_m + D D^H
  CholeskyFactor re_part_;  // factor of Re(D (D^H D + rho I)^{-1} D^H)
  QVector dhy_;
};

struct BpdnResult {
  QVector q;              // final constrained least-squares iterate
  QVector p;              // final thresholded iterate (exactly sparse)
  RealVector re_lambda;   // multiplier real part from the last q-update
  RealVector re_violation_per_iter;  // ||Re(D q^(k))|| per iteration
  double max_re_violation = 0.0;
  AdmmState state;
  ConvergenceTrace trace;
  SolveStatus status;
};

BpdnResult bpdn_solve(const BpdnProblem& prob, const AdmmConfig& config);

struct BpdnInstance {
  QMatrix d;
  QVector q0;
  QVector y;
};

/// Deterministic synthetic instance: D with unit-Gaussian quaternion entries
/// and unit-normalized columns, q0 sparse with the requested density and
/// Re(D q0) = 0 enforced by projecting the support coefficients onto the
/// nullspace of the real-part map, y = D q0 plus pure quaternion Gaussian
/// noise with per-component deviation sigma. Identical seeds produce bitwise
/// identical instances.
BpdnInstance make_pure_instance(std::size_t m, std::size_t n, double sparsity, double sigma,
                                std::uint64_t seed);

}  // namespace qopt
