#include "qopt/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>
#include <random>
#include <stdexcept>

#include "qopt/ghr.hpp"
#include "qopt/widely_affine.hpp"

namespace qopt {

double l1_norm(const QVector& q) {
  double s = 0.0;
  for (std::size_t t = 0; t < q.size(); ++t) {
    s += modulus(q[t]);
  }
  return s;
}

QVector prox_l1(const QVector& q, double lambda) {
  if (lambda < 0.0) {
    throw std::invalid_argument("prox_l1: lambda must be nonnegative");
  }
  QVector out(q.size());
  for (std::size_t t = 0; t < q.size(); ++t) {
    const Quaternion v = q[t];
    const double mod = modulus(v);
    if (mod <= lambda) {
      out.set(t, Quaternion::zero());
    } else {
      out.set(t, v * (1.0 - lambda / mod));
    }
  }
  return out;
}

QVector project_nonneg_parts(const QVector& q) {
  QVector out(q.size());
  for (std::size_t t = 0; t < q.size(); ++t) {
    const Quaternion v = q[t];
    out.set(t, {std::max(v.a, 0.0), std::max(v.b, 0.0), std::max(v.c, 0.0), std::max(v.d, 0.0)});
  }
  return out;
}

QVector project_soc(const QVector& q) {
  QVector out(q.size());
  for (std::size_t t = 0; t < q.size(); ++t) {
    const Quaternion v = q[t];
    const double s = std::sqrt(v.b * v.b + v.c * v.c + v.d * v.d);
    if (v.a >= s) {
      out.set(t, v);
    } else if (v.a <= -s) {
      out.set(t, Quaternion::zero());
    } else {
      const double scale = 0.5 * (v.a + s) / s;
      out.set(t, {0.5 * (v.a + s), scale * v.b, scale * v.c, scale * v.d});
    }
  }
  return out;
}

namespace {

std::function<QVector(const QVector&)> projection_for(const WllsProblem& prob) {
  switch (prob.cone) {
    case ConstraintSet::nonneg_parts:
      return [](const QVector& q) { return project_nonneg_parts(q); };
    case ConstraintSet::soc_cone:
      return [](const QVector& q) { return project_soc(q); };
    case ConstraintSet::custom:
      if (!prob.custom_projection) {
        throw std::invalid_argument("wlls: custom cone requires a projection callback");
      }
      return prob.custom_projection;
  }
  throw std::invalid_argument("wlls: unknown constraint set");
}

// Subproblem objective of the q-update at penalty rho and center v:
// 0.5*||P(q) - y||^2 + (rho/2)*||q - v||^2.
struct WllsSubproblem {
  const WLQuadratic& data;
  double rho;
  QVector v;

  QVector grad(const QVector& q) const {
    return wl_quadratic_conj_gradient(data, q) + (0.25 * rho) * (q - v);
  }
};

// Warm-started steepest descent with exact line search (the subproblem is an
// exactly quadratic widely linear least squares). Returns the final gradient
// norm so the outer solver can record the inner residual.
struct GdSolution {
  QVector x;
  double grad_norm;
};

GdSolution solve_subproblem_gd(const WllsSubproblem& sub, QVector q, int max_iter, double tol) {
  double gnorm = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    const QVector g = sub.grad(q);
    const double gsq = inner_product(g, g);
    gnorm = std::sqrt(gsq);
    if (gnorm <= tol) return {std::move(q), gnorm};
    const QVector g2 = sub.grad(q - g);
    const double curvature = gsq - inner_product(g2, g);
    if (!(curvature > 0.0)) return {std::move(q), gnorm};
    q = q - (gsq / curvature) * g;
  }
  gnorm = norm2(sub.grad(q));
  return {std::move(q), gnorm};
}

}  // namespace

WllsResult wlls_solve(const WllsProblem& prob, const AdmmConfig& config,
                      const WllsOptions& options) {
  const std::size_t n = prob.dim();
  const std::size_t m = prob.p1.rows();
  const bool shapes_ok = prob.p2.rows() == m && prob.p3.rows() == m && prob.p4.rows() == m &&
                         prob.p2.cols() == n && prob.p3.cols() == n && prob.p4.cols() == n &&
                         prob.y.size() == m;
  if (!shapes_ok) {
    throw std::invalid_argument("wlls: coefficient matrices must share shape m x n and y must "
                                "have length m");
  }
  const auto project = projection_for(prob);
  const WLQuadratic data{prob.p1, prob.p2, prob.p3, prob.p4, prob.y};

  AdmmProblem ap;
  ap.coupling = WidelyLinearCoupling::consensus(n);
  ap.f = [data](const QVector& q) { return wl_quadratic_value(data, q); };
  ap.g = [](const QVector&) { return 0.0; };
  ap.p_update = [project](const QVector& q, const QVector& u, double) { return project(q + u); };

  if (options.subsolver == WllsSubsolver::explicit_augmented) {
    // Stacked-real normal equations (P^T P + rho I) x = P^T y + rho v, factored
    // once; the result's first-block extraction is the stacked-real unpacking.
    const WidelyAffineMap map{prob.p1, prob.p2, prob.p3, prob.p4, QVector::zero(m)};
    const AugRealSystem sys = to_aug_real_matrix(map);
    const RealMatrix pt = transpose(sys.a);
    RealMatrix normal = pt * sys.a;
    for (std::size_t t = 0; t < 4 * n; ++t) {
      normal(t, t) += config.rho;
    }
    auto chol = std::make_shared<CholeskyFactor>(normal);
    auto rhs0 = std::make_shared<RealVector>(matvec(pt, to_aug_real(prob.y).data));
    ap.q_update = [chol, rhs0](const QVector& p, const QVector& u, double rho) {
      const RealVector v = to_aug_real(p - u).data;
      return from_aug_real(AugRealVector{chol->solve(*rhs0 + rho * v)});
    };
  } else {
    auto warm = std::make_shared<QVector>(QVector::zero(n));
    auto inner_res = std::make_shared<double>(0.0);
    const int inner_iters = options.inner_iters;
    const double inner_tol = options.inner_tol;
    ap.q_update = [data, warm, inner_res, inner_iters, inner_tol](const QVector& p,
                                                                  const QVector& u, double rho) {
      WllsSubproblem sub{data, rho, p - u};
      GdSolution sol = solve_subproblem_gd(sub, *warm, inner_iters, inner_tol);
      *warm = std::move(sol.x);
      *inner_res = sol.grad_norm;
      return *warm;
    };
    ap.q_inner_residual = [inner_res] { return *inner_res; };
  }

  AdmmResult res = admm_solve(ap, config);
  WllsResult out;
  out.solution = res.state.p;
  out.state = std::move(res.state);
  out.trace = std::move(res.trace);
  out.status = res.status;
  return out;
}

BpdnQUpdate::BpdnQUpdate(const QMatrix& d, const QVector& y, double rho)
    : d_(d), dh_(hermitian(d)), rho_(rho),
      gram_([&] {
        if (!(rho > 0.0)) {
          throw std::invalid_argument("bpdn q-update: rho must be strictly positive");
        }
        if (y.size() != d.rows()) {
          throw std::invalid_argument("bpdn q-update: y length must match dictionary rows");
        }
        const std::size_t m = d.rows();
        QMatrix g = matmul(d, hermitian(d));
        for (std::size_t t = 0; t < m; ++t) {
          g.set(t, t, g.at(t, t) + Quaternion(rho));
        }
        const WidelyAffineMap gm = WidelyAffineMap::strictly_affine(g, QVector::zero(m));
        return CholeskyFactor(to_aug_real_matrix(gm).a);
      }()),
      re_part_([&] {
        const std::size_t m = d.rows();
        // Columns of (D^H D + rho I)^{-1} D^H, then the real plane of D times
        // that, symmetrized against roundoff.
        RealMatrix r(m, m);
        for (std::size_t t = 0; t < m; ++t) {
          const QVector z = apply_inverse(column(dh_, t));
          const QVector dz = matvec(d_, z);
          for (std::size_t i = 0; i < m; ++i) {
            r(i, t) = dz[i].a;
          }
        }
        for (std::size_t i = 0; i < m; ++i) {
          for (std::size_t j = i + 1; j < m; ++j) {
            const double s = 0.5 * (r(i, j) + r(j, i));
            r(i, j) = s;
            r(j, i) = s;
          }
        }
        try {
          return CholeskyFactor(r);
        } catch (const std::runtime_error&) {
          throw std::runtime_error(
              "bpdn q-update: Re(D (D^H D + rho I)^{-1} D^H) is singular; the real-part "
              "constraint rows of the dictionary are rank deficient");
        }
      }()),
      dhy_(matvec(dh_, y)) {}

QVector BpdnQUpdate::apply_inverse(const QVector& x) const {
  const QVector dx = matvec(d_, x);
  const QVector w = from_aug_real(AugRealVector{gram_.solve(to_aug_real(dx).data)});
  return (1.0 / rho_) * (x - matvec(dh_, w));
}

BpdnQUpdate::Update BpdnQUpdate::solve(const QVector& v) const {
  if (v.size() != d_.cols()) {
    throw std::invalid_argument("bpdn q-update: v length must match dictionary columns");
  }
  const QVector q_un = apply_inverse(rho_ * v + dhy_);
  const std::size_t m = d_.rows();
  RealVector re_dq(m);
  {
    const QVector dq = matvec(d_, q_un);
    for (std::size_t i = 0; i < m; ++i) {
      re_dq[i] = dq[i].a;
    }
  }
  Update out;
  out.re_lambda = 0.25 * re_part_.solve(re_dq);
  QVector lam_real(m);
  for (std::size_t i = 0; i < m; ++i) {
    lam_real.set(i, Quaternion(out.re_lambda[i]));
  }
  out.q = q_un - 4.0 * apply_inverse(matvec(dh_, lam_real));
  return out;
}

BpdnResult bpdn_solve(const BpdnProblem& prob, const AdmmConfig& config) {
  if (!(prob.beta > 0.0)) {
    throw std::invalid_argument("bpdn: beta must be strictly positive");
  }
  const std::size_t n = prob.d.cols();
  const BpdnQUpdate qupd(prob.d, prob.y, config.rho);

  BpdnResult out;
  const QMatrix& d = prob.d;
  AdmmProblem ap;
  ap.coupling = WidelyLinearCoupling::consensus(n);
  ap.f = [&d, &prob](const QVector& q) {
    const QVector r = matvec(d, q) - prob.y;
    const double s = norm2(r);
    return 0.5 * s * s;
  };
  ap.g = [&prob](const QVector& p) { return prob.beta * l1_norm(p); };
  ap.q_update = [&qupd, &out, &d](const QVector& p, const QVector& u, double) {
    BpdnQUpdate::Update upd = qupd.solve(p - u);
    out.re_lambda = upd.re_lambda;
    const QVector dq = matvec(d, upd.q);
    double viol = 0.0;
    for (std::size_t i = 0; i < dq.size(); ++i) {
      viol += dq[i].a * dq[i].a;
    }
    viol = std::sqrt(viol);
    out.re_violation_per_iter.push_back(viol);
    out.max_re_violation = std::max(out.max_re_violation, viol);
    return upd.q;
  };
  ap.p_update = [&prob](const QVector& q, const QVector& u, double rho) {
    return prox_l1(q + u, prob.beta / rho);
  };

  AdmmResult res = admm_solve(ap, config);
  out.q = res.state.q;
  out.p = res.state.p;
  out.state = std::move(res.state);
  out.trace = std::move(res.trace);
  out.status = res.status;
  return out;
}

namespace {

// Gaussian draws built on the bit-exact mt19937_64 stream; explicit Box-Muller
// keeps instances identical across standard libraries.
class GaussianSampler {
 public:
  explicit GaussianSampler(std::uint64_t seed) : eng_(seed) {}

  double uniform01() {  // in (0, 1]
    return 1.0 - static_cast<double>(eng_() >> 11) * 0x1.0p-53;
  }

  double gauss() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = uniform01();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * 3.14159265358979323846 * u2;
    spare_ = r * std::sin(angle);
    has_spare_ = true;
    return r * std::cos(angle);
  }

  std::uint64_t raw() { return eng_(); }

 private:
  std::mt19937_64 eng_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace

BpdnInstance make_pure_instance(std::size_t m, std::size_t n, double sparsity, double sigma,
                                std::uint64_t seed) {
  if (m == 0 || m >= n) {
    throw std::invalid_argument("make_pure_instance: need 0 < m < n");
  }
  if (!(sparsity > 0.0) || !(sparsity < 1.0)) {
    throw std::invalid_argument("make_pure_instance: sparsity must lie in (0, 1)");
  }
  if (sigma < 0.0) {
    throw std::invalid_argument("make_pure_instance: sigma must be nonnegative");
  }
  GaussianSampler rng(seed);

  BpdnInstance inst;
  inst.d = QMatrix(m, n);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      inst.d.set(i, j, {rng.gauss(), rng.gauss(), rng.gauss(), rng.gauss()});
    }
  }
  for (std::size_t j = 0; j < n; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      s += norm_sq(inst.d.at(i, j));
    }
    const double inv = 1.0 / std::sqrt(s);
    for (std::size_t i = 0; i < m; ++i) {
      inst.d.set(i, j, inst.d.at(i, j) * inv);
    }
  }

  const std::size_t s_count =
      std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(sparsity * n)));

  for (int attempt = 0; attempt < 64; ++attempt) {
    // Partial Fisher-Yates draw of the support.
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    for (std::size_t t = 0; t < s_count; ++t) {
      const std::size_t pick = t + static_cast<std::size_t>(rng.raw() % (n - t));
      std::swap(idx[t], idx[pick]);
    }
    std::vector<std::size_t> support(idx.begin(), idx.begin() + s_count);
    std::sort(support.begin(), support.end());

    RealVector coeff(4 * s_count);
    for (double& v : coeff) {
      v = rng.gauss();
    }

    // Real-part map restricted to the support: row r, unknown (t, component).
    RealMatrix t_map(m, 4 * s_count);
    for (std::size_t t = 0; t < s_count; ++t) {
      for (std::size_t r = 0; r < m; ++r) {
        const Quaternion dv = inst.d.at(r, support[t]);
        t_map(r, 4 * t + 0) = dv.a;
        t_map(r, 4 * t + 1) = -dv.b;
        t_map(r, 4 * t + 2) = -dv.c;
        t_map(r, 4 * t + 3) = -dv.d;
      }
    }
    try {
      const CholeskyFactor gram(t_map * transpose(t_map));
      const RealVector w = gram.solve(matvec(t_map, coeff));
      const RealVector correction = matvec(transpose(t_map), w);
      for (std::size_t t = 0; t < coeff.size(); ++t) {
        coeff[t] -= correction[t];
      }
    } catch (const std::runtime_error&) {
      continue;  // degenerate support, nullspace projection unavailable: resample
    }

    inst.q0 = QVector::zero(n);
    for (std::size_t t = 0; t < s_count; ++t) {
      inst.q0.set(support[t],
                  {coeff[4 * t + 0], coeff[4 * t + 1], coeff[4 * t + 2], coeff[4 * t + 3]});
    }
    inst.y = matvec(inst.d, inst.q0);
    for (std::size_t i = 0; i < m; ++i) {
      inst.y.set(i, inst.y[i] + Quaternion(0.0, sigma * rng.gauss(), sigma * rng.gauss(),
                                           sigma * rng.gauss()));
    }
    return inst;
  }
  throw std::runtime_error("make_pure_instance: could not find a support with a nontrivial "
                           "real-part nullspace");
}

}  // namespace qopt
