#include "qopt/admm.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

namespace qopt {

WidelyLinearCoupling WidelyLinearCoupling::consensus(std::size_t n) {
  WidelyLinearCoupling c;
  c.kind = Kind::consensus;
  c.consensus_dim = n;
  c.c = QVector::zero(n);
  return c;
}

WidelyLinearCoupling WidelyLinearCoupling::consensus_dense(std::size_t n) {
  WidelyLinearCoupling c;
  c.a1 = QMatrix::identity(n);
  c.a2 = c.a3 = c.a4 = QMatrix::zero(n, n);
  c.b1 = -1.0 * QMatrix::identity(n);
  c.b2 = c.b3 = c.b4 = QMatrix::zero(n, n);
  c.c = QVector::zero(n);
  return c;
}

QVector apply_q_part(const WidelyLinearCoupling& c, const QVector& q) {
  if (c.kind == WidelyLinearCoupling::Kind::consensus) {
    if (q.size() != c.consensus_dim) {
      throw std::invalid_argument("coupling: q length mismatch");
    }
    return q;
  }
  QVector out = matvec(c.a1, q);
  out = out + matvec(c.a2, involution(q, CanonicalUnit::i));
  out = out + matvec(c.a3, involution(q, CanonicalUnit::j));
  out = out + matvec(c.a4, involution(q, CanonicalUnit::k));
  return out;
}

QVector apply_p_part(const WidelyLinearCoupling& c, const QVector& p) {
  if (c.kind == WidelyLinearCoupling::Kind::consensus) {
    if (p.size() != c.consensus_dim) {
      throw std::invalid_argument("coupling: p length mismatch");
    }
    return -p;
  }
  QVector out = matvec(c.b1, p);
  out = out + matvec(c.b2, involution(p, CanonicalUnit::i));
  out = out + matvec(c.b3, involution(p, CanonicalUnit::j));
  out = out + matvec(c.b4, involution(p, CanonicalUnit::k));
  return out;
}

QVector coupling_residual(const WidelyLinearCoupling& c, const QVector& q, const QVector& p) {
  if (c.kind == WidelyLinearCoupling::Kind::consensus) {
    return q - p;
  }
  return apply_q_part(c, q) + apply_p_part(c, p) - c.c;
}

QVector adjoint_p_part(const WidelyLinearCoupling& c, const QVector& w) {
  if (c.kind == WidelyLinearCoupling::Kind::consensus) {
    return -w;
  }
  QVector out = matvec(hermitian(c.b1), w);
  out = out + involution(matvec(hermitian(c.b2), w), CanonicalUnit::i);
  out = out + involution(matvec(hermitian(c.b3), w), CanonicalUnit::j);
  out = out + involution(matvec(hermitian(c.b4), w), CanonicalUnit::k);
  return out;
}

void write_csv(const ConvergenceTrace& trace, std::ostream& out) {
  out << "k,objective,primal_res,dual_res\n";
  char line[192];
  for (const TraceRow& r : trace.rows) {
    std::snprintf(line, sizeof(line), "%d,%.17g,%.17g,%.17g\n", r.k, r.objective, r.primal_res,
                  r.dual_res);
    out << line;
  }
}

std::string trace_to_json(const ConvergenceTrace& trace) {
  nlohmann::json j = nlohmann::json::array();
  for (const TraceRow& r : trace.rows) {
    j.push_back({{"k", r.k},
                 {"objective", r.objective},
                 {"primal_res", r.primal_res},
                 {"dual_res", r.dual_res},
                 {"q_inner_res", r.q_inner_res},
                 {"p_inner_res", r.p_inner_res}});
  }
  return j.dump(2);
}

namespace {

void check_config(const AdmmConfig& config) {
  if (!(config.rho > 0.0)) {
    throw std::invalid_argument("admm: rho must be strictly positive");
  }
  if (config.max_iter <= 0) {
    throw std::invalid_argument("admm: max_iter must be positive");
  }
  if (!(config.eps_abs > 0.0) || !(config.eps_rel > 0.0)) {
    throw std::invalid_argument("admm: eps_abs and eps_rel must be positive");
  }
}

void check_state(const AdmmProblem& problem, const AdmmState& state) {
  if (state.q.size() != problem.coupling.q_dim() || state.p.size() != problem.coupling.p_dim() ||
      state.u.size() != problem.coupling.out_dim()) {
    throw std::invalid_argument("admm: state dimensions do not match coupling");
  }
}

}  // namespace

AdmmState admm_step(const AdmmProblem& problem, const AdmmConfig& config, const AdmmState& state) {
  check_config(config);
  check_state(problem, state);
  AdmmState next;
  next.k = state.k + 1;
  try {
    next.q = problem.q_update(state.p, state.u, config.rho);
  } catch (const std::exception& e) {
    throw std::runtime_error("admm: q-update oracle failed at iteration " +
                             std::to_string(next.k) + ": " + e.what());
  }
  try {
    next.p = problem.p_update(next.q, state.u, config.rho);
  } catch (const std::exception& e) {
    throw std::runtime_error("admm: p-update oracle failed at iteration " +
                             std::to_string(next.k) + ": " + e.what());
  }
  next.u = state.u + coupling_residual(problem.coupling, next.q, next.p);
  return next;
}

AdmmResult admm_solve(const AdmmProblem& problem, const AdmmConfig& config,
                      std::optional<AdmmState> init) {
  check_config(config);
  AdmmState state;
  if (init) {
    state = *init;
  } else {
    state.q = QVector::zero(problem.coupling.q_dim());
    state.p = QVector::zero(problem.coupling.p_dim());
    state.u = QVector::zero(problem.coupling.out_dim());
  }
  check_state(problem, state);

  const double root_p = std::sqrt(4.0 * static_cast<double>(problem.coupling.out_dim()));
  const double root_n = std::sqrt(4.0 * static_cast<double>(problem.coupling.q_dim()));

  AdmmResult result;
  result.status = SolveStatus::max_iter_reached;
  for (int it = 0; it < config.max_iter; ++it) {
    const QVector p_prev = state.p;
    state = admm_step(problem, config, state);

    const QVector aq = apply_q_part(problem.coupling, state.q);
    const QVector bp = apply_p_part(problem.coupling, state.p);
    const double primal_res = norm2(aq + bp - problem.coupling.c);
    const double dual_res = config.rho * norm2(adjoint_p_part(problem.coupling, state.p - p_prev));
    const double objective = problem.f(state.q) + problem.g(state.p);
    TraceRow row{state.k, objective, primal_res, dual_res};
    if (problem.q_inner_residual) row.q_inner_res = problem.q_inner_residual();
    if (problem.p_inner_residual) row.p_inner_res = problem.p_inner_residual();
    result.trace.rows.push_back(row);

    const double primal_tol =
        root_p * config.eps_abs +
        config.eps_rel * std::max({norm2(aq), norm2(bp), norm2(problem.coupling.c)});
    const double dual_tol = root_n * config.eps_abs + config.eps_rel * config.rho * norm2(state.u);
    if (primal_res <= primal_tol && dual_res <= dual_tol) {
      result.status = SolveStatus::converged;
      break;
    }
  }
  result.state = state;
  return result;
}

AdmmState proximal_form_step(const ProxOperator& f_prox, const ProxOperator& g_prox,
                             const AdmmState& state, double rho) {
  if (!(rho > 0.0)) {
    throw std::invalid_argument("proximal_form_step: rho must be strictly positive");
  }
  AdmmState next;
  next.k = state.k + 1;
  next.q = f_prox(state.p - state.u, rho);
  next.p = g_prox(next.q + state.u, rho);
  next.u = state.u + next.q - next.p;
  return next;
}

}  // namespace qopt
