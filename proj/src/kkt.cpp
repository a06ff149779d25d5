#include "qopt/kkt.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <json.hpp>

namespace qopt {

namespace {

constexpr double kFeasTol = 1e-9;

void check_point(const ConvexProblem& p, const LagrangePoint& pt) {
  if (pt.q.size() != p.dim) {
    throw std::invalid_argument("lagrange point: primal dimension mismatch");
  }
  if (pt.nu.size() != p.inequalities.size()) {
    throw std::invalid_argument("lagrange point: nu length must match inequality count");
  }
  const std::size_t want_lam = p.equality ? p.equality->out_dim() : 0;
  if (pt.lam.size() != want_lam) {
    throw std::invalid_argument("lagrange point: lam length must match equality count");
  }
}

double objective_terms(const ConvexProblem& p, const LagrangePoint& pt) {
  double v = p.objective.value(pt.q);
  for (std::size_t i = 0; i < p.inequalities.size(); ++i) {
    v += pt.nu[i] * p.inequalities[i].value(pt.q);
  }
  return v;
}

}  // namespace

double KKTReport::max_residual() const {
  return std::max({primal_ineq_violation, primal_eq_residual, dual_nonneg_violation,
                   complementary_slackness, stationarity_residual});
}

std::string to_json(const KKTReport& r) {
  nlohmann::json j;
  j["primal_ineq_violation"] = r.primal_ineq_violation;
  j["primal_eq_residual"] = r.primal_eq_residual;
  j["dual_nonneg_violation"] = r.dual_nonneg_violation;
  j["complementary_slackness"] = r.complementary_slackness;
  j["stationarity_residual"] = r.stationarity_residual;
  return j.dump(2);
}

double lagrangian(const ConvexProblem& p, const LagrangePoint& pt) {
  check_point(p, pt);
  double v = objective_terms(p, pt);
  if (p.equality) {
    v += inner_product(pt.lam, apply(*p.equality, pt.q));
  }
  return v;
}

double lagrangian_aug_real(const ConvexProblem& p, const LagrangePoint& pt) {
  check_point(p, pt);
  double v = objective_terms(p, pt);
  if (p.equality) {
    const AugRealSystem sys = to_aug_real_matrix(*p.equality);
    const RealVector x = to_aug_real(pt.q).data;
    const RealVector lam = to_aug_real(pt.lam).data;
    v += dot(lam, matvec(sys.a, x) - sys.b);
  }
  return v;
}

double lagrangian_aug_quat(const ConvexProblem& p, const LagrangePoint& pt) {
  check_point(p, pt);
  double v = objective_terms(p, pt);
  if (p.equality) {
    const QMatrix ah = to_aug_quat_matrix(*p.equality);
    const AugQuatVector qh = to_aug_quat(pt.q);
    const AugQuatVector bh = to_aug_quat(p.equality->b);
    const AugQuatVector lamh = to_aug_quat(pt.lam);
    const QVector residual = matvec(ah, qh.data) - bh.data;
    v += 0.25 * dot_h(lamh.data, residual).a;
  }
  return v;
}

QVector lagrangian_conj_gradient(const ConvexProblem& p, const LagrangePoint& pt) {
  check_point(p, pt);
  QVector g = conj_gradient(p.objective, pt.q);
  for (std::size_t i = 0; i < p.inequalities.size(); ++i) {
    if (pt.nu[i] != 0.0) {
      g = g + pt.nu[i] * conj_gradient(p.inequalities[i], pt.q);
    }
  }
  if (p.equality) {
    g = g + 0.25 * adjoint_apply(*p.equality, pt.lam);
  }
  return g;
}

DualBound dual_lower_bound(const ConvexProblem& p, const RealVector& nu, const QVector& lam,
                           const DualBoundOptions& options) {
  for (double v : nu) {
    if (v < 0.0) {
      throw std::invalid_argument("dual_lower_bound: nu must be elementwise nonnegative");
    }
  }
  LagrangePoint probe{QVector::zero(p.dim), nu, lam};
  RealDiffFunction inner;
  inner.value = [&p, nu, lam](const QVector& q) {
    LagrangePoint pt{q, nu, lam};
    return lagrangian(p, pt);
  };
  const bool all_analytic =
      static_cast<bool>(p.objective.analytic_conj_gradient) &&
      std::all_of(p.inequalities.begin(), p.inequalities.end(),
                  [](const RealDiffFunction& f) { return static_cast<bool>(f.analytic_conj_gradient); });
  if (all_analytic) {
    inner.analytic_conj_gradient = [&p, nu, lam](const QVector& q) {
      LagrangePoint pt{q, nu, lam};
      return lagrangian_conj_gradient(p, pt);
    };
  }
  DescentOptions dopt;
  dopt.max_iter = options.max_iter;
  dopt.tol = options.tol;
  dopt.step = options.step;
  const QVector start = options.start ? *options.start : QVector::zero(p.dim);
  DescentResult r = gradient_descent(inner, start, dopt);
  DualBound out;
  out.minimizer = r.x;
  out.value = inner.value(r.x);
  out.inner_grad_norm = r.trace.empty() ? 0.0 : r.trace.back().grad_norm;
  return out;
}

KKTReport kkt_report(const ConvexProblem& p, const LagrangePoint& pt) {
  check_point(p, pt);
  KKTReport rep;
  for (std::size_t i = 0; i < p.inequalities.size(); ++i) {
    const double fi = p.inequalities[i].value(pt.q);
    rep.primal_ineq_violation = std::max(rep.primal_ineq_violation, std::max(fi, 0.0));
    rep.dual_nonneg_violation = std::max(rep.dual_nonneg_violation, std::max(-pt.nu[i], 0.0));
    rep.complementary_slackness = std::max(rep.complementary_slackness, std::fabs(pt.nu[i] * fi));
  }
  if (p.equality) {
    rep.primal_eq_residual = norm2(apply(*p.equality, pt.q));
  }
  rep.stationarity_residual = norm2(lagrangian_conj_gradient(p, pt));
  return rep;
}

FirstOrderCheck first_order_optimality_check(const ConvexProblem& p, const QVector& q_cand,
                                             const std::vector<QVector>& feasible_samples,
                                             double tol) {
  const auto feasible = [&p](const QVector& q) {
    for (const auto& fi : p.inequalities) {
      if (fi.value(q) > kFeasTol) return false;
    }
    if (p.equality && norm2(apply(*p.equality, q)) > kFeasTol) return false;
    return true;
  };
  if (!feasible(q_cand)) {
    throw std::invalid_argument("first_order_optimality_check: candidate point is infeasible");
  }
  const QVector g = conj_gradient(p.objective, q_cand);
  FirstOrderCheck out{true, 0.0, 0};
  bool first = true;
  for (const QVector& r : feasible_samples) {
    if (r.size() != q_cand.size() || !feasible(r)) continue;
    const double ip = inner_product(g, r - q_cand);
    if (first || ip < out.min_inner_product) {
      out.min_inner_product = ip;
      first = false;
    }
    ++out.samples_used;
  }
  out.satisfied = out.min_inner_product >= -tol;
  return out;
}

}  // namespace qopt
