#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qopt/ghr.hpp"
#include "qopt/widely_affine.hpp"

namespace qopt {

/// minimize f0(q) subject to f_i(q) <= 0 and the widely affine equality
/// constraint. Inequalities are opaque callbacks; the equality block is
/// optional.
struct ConvexProblem {
  RealDiffFunction objective;
  std::vector<RealDiffFunction> inequalities;
  std::optional<WidelyAffineMap> equality;
  std::size_t dim = 0;
};

/// Candidate primal/dual point. nu pairs with the inequalities, lam with the
/// equality block (empty when the problem has none). Feasibility is checked by
/// the report functions, never enforced here.
struct LagrangePoint {
  QVector q;
  RealVector nu;
  QVector lam;
};

struct KKTReport {
  double primal_ineq_violation = 0.0;   // max_i max(f_i, 0)
  double primal_eq_residual = 0.0;      // norm of the equality residual
  double dual_nonneg_violation = 0.0;   // max_i max(-nu_i, 0)
  double complementary_slackness = 0.0; // max_i |nu_i f_i|
  double stationarity_residual = 0.0;   // norm of the stationarity left side
  double max_residual() const;
};

std::string to_json(const KKTReport& r);

/// f0(q) + sum nu_i f_i(q) + Re<lam, equality residual>.
double lagrangian(const ConvexProblem& p, const LagrangePoint& pt);
/// Same quantity evaluated through the stacked real representation.
double lagrangian_aug_real(const ConvexProblem& p, const LagrangePoint& pt);
/// Same quantity evaluated through the stacked involution representation.
double lagrangian_aug_quat(const ConvexProblem& p, const LagrangePoint& pt);

struct DualBoundOptions {
  int max_iter = 5000;
  double tol = 1e-9;
  StepRule step = StepRule::backtracking();
  std::optional<QVector> start;
};

/// Result of minimizing the Lagrangian over q for fixed multipliers. The value
/// is a certified lower bound on the primal optimum only to the extent that
/// inner_grad_norm is small; callers decide trust.
struct DualBound {
  double value;
  double inner_grad_norm;
  QVector minimizer;
};

DualBound dual_lower_bound(const ConvexProblem& p, const RealVector& nu, const QVector& lam,
                           const DualBoundOptions& options = {});

KKTReport kkt_report(const ConvexProblem& p, const LagrangePoint& pt);

/// Conjugated gradient of the Lagrangian in q (the stationarity left side).
QVector lagrangian_conj_gradient(const ConvexProblem& p, const LagrangePoint& pt);

struct FirstOrderCheck {
  bool satisfied;
  double min_inner_product;
  std::size_t samples_used;
};

/// Sampled necessary optimality check: Re<grad f0(q), r - q> >= -tol over the
/// supplied feasible samples. Infeasible samples are skipped; an infeasible
/// candidate throws.
FirstOrderCheck first_order_optimality_check(const ConvexProblem& p, const QVector& q_cand,
                                             const std::vector<QVector>& feasible_samples,
                                             double tol = 1e-6);

}  // namespace qopt
