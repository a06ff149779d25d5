#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qopt/qlinalg.hpp"

namespace qopt {

/// Widely linear coupling Sum_i A_i q^(.) + Sum_i B_i p^(.) = c between the two
/// solver blocks. The consensus constraint q - p = 0 is kept as a structural
/// tag so large problems never touch dense identity matrices.
struct WidelyLinearCoupling {
  enum class Kind { general, consensus };

  Kind kind = Kind::general;
  std::size_t consensus_dim = 0;

  QMatrix a1, a2, a3, a4;  // p x n, acting on q
  QMatrix b1, b2, b3, b4;  // p x m, acting on p
  QVector c;               // length p

  std::size_t q_dim() const {
    return kind == Kind::consensus ? consensus_dim : a1.cols();
  }
  std::size_t p_dim() const {
    return kind == Kind::consensus ? consensus_dim : b1.cols();
  }
  std::size_t out_dim() const {
    return kind == Kind::consensus ? consensus_dim : a1.rows();
  }

  /// q - p = 0.
  static WidelyLinearCoupling consensus(std::size_t n);
  /// Same constraint with materialized identity blocks (testing aid).
  static WidelyLinearCoupling consensus_dense(std::size_t n);
};

QVector apply_q_part(const WidelyLinearCoupling& c, const QVector& q);
QVector apply_p_part(const WidelyLinearCoupling& c, const QVector& p);
/// r(q, p) = A-part(q) + B-part(p) - c.
QVector coupling_residual(const WidelyLinearCoupling& c, const QVector& q, const QVector& p);
/// B1^H w + (B2^H w)^i + (B3^H w)^j + (B4^H w)^k, used by the dual residual.
QVector adjoint_p_part(const WidelyLinearCoupling& c, const QVector& w);

struct AdmmConfig {
  double rho = 1.0;  // must be > 0
  int max_iter = 1000;
  double eps_abs = 1e-6;
  double eps_rel = 1e-4;
};

/// Iterates (q, p, u). u is the scaled dual variable; the multiplier is rho*u.
struct AdmmState {
  QVector q, p, u;
  int k = 0;
};

/// Sub-minimization oracles. q_update minimizes f(q) + (rho/2)|r(q, p) + u|^2
/// for fixed (p, u); p_update minimizes g(p) + (rho/2)|r(q, p) + u|^2 for fixed
/// (q, u). Oracles may be inexact; overall convergence tolerates approximate
/// subproblem solutions for closed proper convex f, g with a saddle point
/// (caller contract, not checked). Inexact oracles can expose their last inner
/// residual through the optional reporters; the solver polls them after each
/// update and records the values in the trace.
struct AdmmProblem {
  WidelyLinearCoupling coupling;
  std::function<double(const QVector&)> f;
  std::function<double(const QVector&)> g;
  std::function<QVector(const QVector& p, const QVector& u, double rho)> q_update;
  std::function<QVector(const QVector& q, const QVector& u, double rho)> p_update;
  std::function<double()> q_inner_residual;  // optional
  std::function<double()> p_inner_residual;  // optional
};

struct TraceRow {
  int k;
  double objective;
  double primal_res;
  double dual_res;
  double q_inner_res = 0.0;  // as reported by the oracle, 0 for exact solves
  double p_inner_res = 0.0;
};

struct ConvergenceTrace {
  std::vector<TraceRow> rows;
};

/// CSV with header k,objective,primal_res,dual_res.
void write_csv(const ConvergenceTrace& trace, std::ostream& out);
std::string trace_to_json(const ConvergenceTrace& trace);

enum class SolveStatus { converged, max_iter_reached };

/// One scaled-form iteration: q-update, p-update, u <- u + r(q+, p+).
AdmmState admm_step(const AdmmProblem& problem, const AdmmConfig& config, const AdmmState& state);

struct AdmmResult {
  AdmmState state;
  ConvergenceTrace trace;
  SolveStatus status;
};

AdmmResult admm_solve(const AdmmProblem& problem, const AdmmConfig& config,
                      std::optional<AdmmState> init = {});

/// argmin_x f(x) + (rho/2)|x - v|^2 for the consensus special case.
using ProxOperator = std::function<QVector(const QVector& v, double rho)>;

/// Consensus-coupling iteration written directly with proximal operators:
/// q <- prox_{f/rho}(p - u);  p <- prox_{g/rho}(q+ + u);  u <- u + q+ - p+.
AdmmState proximal_form_step(const ProxOperator& f_prox, const ProxOperator& g_prox,
                             const AdmmState& state, double rho);

}  // namespace qopt
