#include "qopt/ghr.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qopt {

namespace {

RealVector fd_real_gradient(const RealDiffFunction& f, const QVector& at) {
  const std::size_t n = at.size();
  const double h = f.fd_base_step * std::max(1.0, norm2(at));
  RealVector grad(4 * n, 0.0);
  QVector probe = at;
  for (std::size_t comp = 0; comp < 4; ++comp) {
    for (std::size_t t = 0; t < n; ++t) {
      const Quaternion base = at[t];
      Quaternion hi = base;
      Quaternion lo = base;
      switch (comp) {
        case 0:
          hi.a += h;
          lo.a -= h;
          break;
        case 1:
          hi.b += h;
          lo.b -= h;
          break;
        case 2:
          hi.c += h;
          lo.c -= h;
          break;
        case 3:
          hi.d += h;
          lo.d -= h;
          break;
      }
      probe.set(t, hi);
      const double fhi = f.value(probe);
      probe.set(t, lo);
      const double flo = f.value(probe);
      probe.set(t, base);
      grad[comp * n + t] = (fhi - flo) / (2.0 * h);
    }
  }
  return grad;
}

}  // namespace

RealVector real_gradient(const RealDiffFunction& f, const QVector& at) {
  if (f.analytic_conj_gradient) {
    // The conjugated gradient packs the four real partials as (fa + i fb + j fc + k fd)/4.
    const QVector g = f.analytic_conj_gradient(at);
    const std::size_t n = at.size();
    RealVector grad(4 * n);
    for (std::size_t t = 0; t < n; ++t) {
      const Quaternion v = g[t];
      grad[t] = 4.0 * v.a;
      grad[n + t] = 4.0 * v.b;
      grad[2 * n + t] = 4.0 * v.c;
      grad[3 * n + t] = 4.0 * v.d;
    }
    return grad;
  }
  return fd_real_gradient(f, at);
}

QVector ghr_derivative(const RealDiffFunction& f, const QVector& at, const Quaternion& mu,
                       bool conjugated) {
  if (mu.is_zero()) {
    throw std::domain_error("ghr_derivative: mu must be nonzero");
  }
  const std::size_t n = at.size();
  const RealVector grad = real_gradient(f, at);
  const Quaternion iu = rotate(Quaternion::unit_i(), mu);
  const Quaternion ju = rotate(Quaternion::unit_j(), mu);
  const Quaternion ku = rotate(Quaternion::unit_k(), mu);
  const double sign = conjugated ? 1.0 : -1.0;
  QVector out(n);
  for (std::size_t t = 0; t < n; ++t) {
    Quaternion v{grad[t]};
    v += iu * (sign * grad[n + t]);
    v += ju * (sign * grad[2 * n + t]);
    v += ku * (sign * grad[3 * n + t]);
    out.set(t, v * 0.25);
  }
  return out;
}

QVector conj_gradient(const RealDiffFunction& f, const QVector& at) {
  return ghr_derivative(f, at, Quaternion::one(), true);
}

QVector plain_gradient(const RealDiffFunction& f, const QVector& at) {
  return ghr_derivative(f, at, Quaternion::one(), false);
}

namespace {

AugQuatVector stack_family(const RealDiffFunction& f, const QVector& at, bool conjugated) {
  const std::size_t n = at.size();
  AugQuatVector out{QVector(4 * n)};
  const std::array<Quaternion, 4> axes = {Quaternion::one(), Quaternion::unit_i(),
                                          Quaternion::unit_j(), Quaternion::unit_k()};
  for (std::size_t blk = 0; blk < 4; ++blk) {
    const QVector g = ghr_derivative(f, at, axes[blk], conjugated);
    for (std::size_t t = 0; t < n; ++t) {
      out.data.set(blk * n + t, g[t]);
    }
  }
  return out;
}

}  // namespace

AugQuatVector aug_quat_gradient(const RealDiffFunction& f, const QVector& at) {
  return stack_family(f, at, false);
}

AugQuatVector aug_quat_conj_gradient(const RealDiffFunction& f, const QVector& at) {
  return stack_family(f, at, true);
}

QVector wl_residual(const WLQuadratic& f, const QVector& q) {
  if (q.size() != f.in_dim()) {
    throw std::invalid_argument("wl_residual: input length mismatch");
  }
  QVector r = matvec(f.p1, q);
  r = r + matvec(f.p2, involution(q, CanonicalUnit::i));
  r = r + matvec(f.p3, involution(q, CanonicalUnit::j));
  r = r + matvec(f.p4, involution(q, CanonicalUnit::k));
  return r - f.y;
}

double wl_quadratic_value(const WLQuadratic& f, const QVector& q) {
  const double r = norm2(wl_residual(f, q));
  return 0.5 * r * r;
}

QVector wl_quadratic_conj_gradient(const WLQuadratic& f, const QVector& q) {
  const QVector r = wl_residual(f, q);
  QVector g = matvec(hermitian(f.p1), r);
  g = g + involution(matvec(hermitian(f.p2), r), CanonicalUnit::i);
  g = g + involution(matvec(hermitian(f.p3), r), CanonicalUnit::j);
  g = g + involution(matvec(hermitian(f.p4), r), CanonicalUnit::k);
  return 0.25 * g;
}

RealDiffFunction as_function(const WLQuadratic& f) {
  RealDiffFunction fn;
  fn.value = [f](const QVector& q) { return wl_quadratic_value(f, q); };
  fn.analytic_conj_gradient = [f](const QVector& q) { return wl_quadratic_conj_gradient(f, q); };
  return fn;
}

double StationarityReport::max_norm() const {
  return std::max({conj_grad_norm, plain_grad_norm, aug_real_norm_scaled, aug_quat_norm,
                   aug_quat_conj_norm});
}

StationarityReport is_stationary(const RealDiffFunction& f, const QVector& q, double tol) {
  if (!(tol > 0.0)) {
    throw std::invalid_argument("is_stationary: tol must be positive");
  }
  StationarityReport rep{};
  rep.conj_grad_norm = norm2(conj_gradient(f, q));
  rep.plain_grad_norm = norm2(plain_gradient(f, q));
  rep.aug_real_norm_scaled = 0.25 * norm2(real_gradient(f, q));
  // Quarter-scaled norm of the stacked representation matches the base norm.
  rep.aug_quat_norm = 0.5 * norm2(aug_quat_gradient(f, q).data);
  rep.aug_quat_conj_norm = 0.5 * norm2(aug_quat_conj_gradient(f, q).data);
  rep.stationary = rep.conj_grad_norm <= tol;
  return rep;
}

DescentResult gradient_descent(const RealDiffFunction& f, const QVector& q0,
                               const DescentOptions& options) {
  DescentResult res;
  res.x = q0;
  res.converged = false;
  double fx = f.value(res.x);
  for (int it = 0; it < options.max_iter; ++it) {
    const QVector g = conj_gradient(f, res.x);
    const double gnorm = norm2(g);
    res.trace.push_back({it, fx, gnorm});
    if (gnorm <= options.tol) {
      res.converged = true;
      return res;
    }
    double eta = options.step.eta0;
    if (options.step.kind == StepRule::Kind::constant) {
      res.x = res.x - eta * g;
      fx = f.value(res.x);
      continue;
    }
    // Backtracking by halving until sufficient decrease. The directional
    // derivative of f along -g is -4|g|^2 (stacked-real chain rule).
    const double slope = 4.0 * gnorm * gnorm;
    QVector trial = res.x - eta * g;
    double ftrial = f.value(trial);
    int backtracks = 0;
    while (ftrial > fx - options.step.sufficient_decrease * eta * slope && backtracks < 60) {
      eta *= 0.5;
      trial = res.x - eta * g;
      ftrial = f.value(trial);
      ++backtracks;
    }
    if (backtracks >= 60 && ftrial >= fx) {
      // objective differences are below floating-point resolution; no further
      // progress is possible along this direction
      break;
    }
    res.x = std::move(trial);
    fx = ftrial;
  }
  const QVector g = conj_gradient(f, res.x);
  const double gnorm = norm2(g);
  res.trace.push_back({options.max_iter, fx, gnorm});
  res.converged = gnorm <= options.tol;
  return res;
}

}  // namespace qopt
