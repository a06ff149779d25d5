#include <doctest.h>

#include "qopt/kkt.hpp"
#include "qopt/solvers.hpp"
#include "support.hpp"

using namespace qopt;
using test::max_abs_diff;

namespace {

QVector scalar_vec(const Quaternion& v) {
  QVector out(1);
  out.set(0, v);
  return out;
}

// exhaustive 1-D search for the prox of lambda*|.| along the radial direction
double radial_prox_oracle(double a, double lambda) {
  double lo = 0.0;
  double hi = a + lambda + 1.0;
  for (int pass = 0; pass < 200; ++pass) {
    const double m1 = lo + (hi - lo) / 3.0;
    const double m2 = hi - (hi - lo) / 3.0;
    const auto obj = [&](double t) { return lambda * t + 0.5 * (t - a) * (t - a); };
    if (obj(m1) < obj(m2)) {
      hi = m2;
    } else {
      lo = m1;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("soft thresholding examples") {
  CHECK(max_abs_diff(prox_l1(scalar_vec({0, 2, 0, 0}), 1.0)[0], Quaternion(0, 1, 0, 0)) < 1e-15);
  CHECK(norm2(prox_l1(scalar_vec({0, 0.5, 0, 0}), 1.0)) == 0.0);
  test::Rng rng(101);
  const QVector q = rng.qvector(5, 2.0);
  CHECK(max_abs_diff(prox_l1(q, 0.0), q) == 0.0);
  CHECK(norm2(prox_l1(QVector::zero(3), 0.7)) == 0.0);
  CHECK_THROWS_AS(prox_l1(q, -0.1), std::invalid_argument);
}

TEST_CASE("soft thresholding matches the radial oracle and is a local minimum") {
  test::Rng rng(102);
  for (int it = 0; it < 40; ++it) {
    const std::size_t n = 1 + rng.index(5);
    const QVector q = rng.qvector(n, 1.5);
    const double lambda = rng.uniform(0.0, 2.0);
    const QVector z = prox_l1(q, lambda);
    for (std::size_t t = 0; t < n; ++t) {
      const double a = modulus(q[t]);
      const double t_star = radial_prox_oracle(a, lambda);
      const double got = modulus(z[t]);
      CHECK(std::fabs(got - t_star) < 1e-6);
      if (got > 0.0) {
        // thresholded entry keeps the direction of the input
        CHECK(max_abs_diff(z[t] * (a / got), q[t]) < 1e-10 * (1.0 + a));
      }
    }

    // coordinate perturbations cannot improve the prox objective
    const auto objective = [&](const QVector& x) {
      const double d = norm2(x - q);
      return lambda * l1_norm(x) + 0.5 * d * d;
    };
    const double base = objective(z);
    for (std::size_t t = 0; t < n; ++t) {
      for (int comp = 0; comp < 4; ++comp) {
        for (double eps : {1e-4, -1e-4}) {
          QVector zp = z;
          Quaternion v = zp[t];
          switch (comp) {
            case 0: v.a += eps; break;
            case 1: v.b += eps; break;
            case 2: v.c += eps; break;
            case 3: v.d += eps; break;
          }
          zp.set(t, v);
          CHECK(objective(zp) >= base - 1e-12);
        }
      }
    }
  }
}

TEST_CASE("componentwise nonnegative projection") {
  QVector q(1);
  q.set(0, {-1, 2, 0, 0});
  CHECK(max_abs_diff(project_nonneg_parts(q)[0], Quaternion(0, 2, 0, 0)) == 0.0);

  test::Rng rng(103);
  const QVector inside = project_nonneg_parts(rng.qvector(4, 2.0));
  CHECK(max_abs_diff(project_nonneg_parts(inside), inside) == 0.0);

  // projection is the closest feasible point
  for (int it = 0; it < 30; ++it) {
    const QVector x = rng.qvector(3, 2.0);
    const QVector px = project_nonneg_parts(x);
    const QVector other = project_nonneg_parts(rng.qvector(3, 2.0));
    CHECK(norm2(px - x) <= norm2(other - x) + 1e-12);
  }
}

TEST_CASE("second-order cone projection") {
  CHECK(max_abs_diff(project_soc(scalar_vec({3, 1, 0, 0}))[0], Quaternion(3, 1, 0, 0)) == 0.0);
  CHECK(norm2(project_soc(scalar_vec({-2, 0, 0, 0}))) == 0.0);
  CHECK(max_abs_diff(project_soc(scalar_vec({0, 2, 0, 0}))[0], Quaternion(1, 1, 0, 0)) < 1e-15);

  test::Rng rng(104);
  for (int it = 0; it < 30; ++it) {
    const QVector x = rng.qvector(3, 2.0);
    const QVector px = project_soc(x);
    // feasibility and idempotence
    for (std::size_t t = 0; t < px.size(); ++t) {
      const Quaternion v = px[t];
      CHECK(v.a >= -1e-14);
      CHECK(v.a * v.a + 1e-12 >= v.b * v.b + v.c * v.c + v.d * v.d);
    }
    CHECK(max_abs_diff(project_soc(px), px) < 1e-14);
    // optimality against other feasible points
    const QVector other = project_soc(rng.qvector(3, 2.0));
    CHECK(norm2(px - x) <= norm2(other - x) + 1e-12);
  }
}

TEST_CASE("both projections are nonexpansive") {
  test::Rng rng(105);
  for (int it = 0; it < 100; ++it) {
    const QVector x = rng.qvector(4, 2.0);
    const QVector y = rng.qvector(4, 2.0);
    CHECK(norm2(project_nonneg_parts(x) - project_nonneg_parts(y)) <= norm2(x - y) + 1e-12);
    CHECK(norm2(project_soc(x) - project_soc(y)) <= norm2(x - y) + 1e-12);
  }
}

TEST_CASE("constrained least squares with identity data term clamps the target") {
  test::Rng rng(106);
  const std::size_t n = 3;
  WllsProblem prob;
  prob.p1 = QMatrix::identity(n);
  prob.p2 = prob.p3 = prob.p4 = QMatrix::zero(n, n);
  prob.y = rng.qvector(n, 2.0);
  prob.cone = ConstraintSet::nonneg_parts;
  AdmmConfig cfg;
  cfg.max_iter = 3000;
  cfg.eps_abs = 1e-11;
  cfg.eps_rel = 1e-10;
  const QVector expect = project_nonneg_parts(prob.y);

  for (WllsSubsolver sub : {WllsSubsolver::explicit_augmented, WllsSubsolver::gradient_descent}) {
    WllsOptions opt;
    opt.subsolver = sub;
    const WllsResult res = wlls_solve(prob, cfg, opt);
    CHECK(res.status == SolveStatus::converged);
    CHECK(max_abs_diff(res.solution, expect) < 1e-6);
  }
}

TEST_CASE("an interior optimum reproduces the unconstrained least squares solution") {
  test::Rng rng(107);
  const std::size_t n = 3, m = 5;
  WllsProblem prob;
  prob.p1 = rng.qmatrix(m, n);
  prob.p2 = rng.qmatrix(m, n, 0.2);
  prob.p3 = rng.qmatrix(m, n, 0.2);
  prob.p4 = rng.qmatrix(m, n, 0.2);
  // target with strictly positive components lies inside the cone
  QVector q_star(n);
  for (std::size_t t = 0; t < n; ++t) {
    q_star.set(t, {0.5 + std::fabs(rng.gauss()), 0.5 + std::fabs(rng.gauss()),
                   0.5 + std::fabs(rng.gauss()), 0.5 + std::fabs(rng.gauss())});
  }
  const WidelyAffineMap map{prob.p1, prob.p2, prob.p3, prob.p4, QVector::zero(m)};
  prob.y = apply_linear(map, q_star);
  prob.cone = ConstraintSet::nonneg_parts;

  AdmmConfig cfg;
  cfg.max_iter = 3000;
  cfg.eps_abs = 1e-11;
  cfg.eps_rel = 1e-10;
  const WllsResult res = wlls_solve(prob, cfg, {});
  CHECK(max_abs_diff(res.solution, q_star) < 1e-6);
}

TEST_CASE("the two subsolvers agree") {
  test::Rng rng(108);
  for (ConstraintSet cone : {ConstraintSet::nonneg_parts, ConstraintSet::soc_cone}) {
    const std::size_t n = 3, m = 6;
    WllsProblem prob;
    prob.p1 = rng.qmatrix(m, n);
    prob.p2 = rng.qmatrix(m, n, 0.3);
    prob.p3 = rng.qmatrix(m, n, 0.3);
    prob.p4 = rng.qmatrix(m, n, 0.3);
    prob.y = rng.qvector(m, 2.0);
    prob.cone = cone;
    AdmmConfig cfg;
    cfg.max_iter = 6000;
    cfg.eps_abs = 1e-11;
    cfg.eps_rel = 1e-10;
    WllsOptions explicit_opt;
    explicit_opt.subsolver = WllsSubsolver::explicit_augmented;
    WllsOptions gd_opt;
    gd_opt.subsolver = WllsSubsolver::gradient_descent;
    const WllsResult a = wlls_solve(prob, cfg, explicit_opt);
    const WllsResult b = wlls_solve(prob, cfg, gd_opt);
    CHECK(max_abs_diff(a.solution, b.solution) < 1e-5);

    // the inexact subsolver reports its inner residual through the trace
    CHECK(a.trace.rows.back().q_inner_res == 0.0);
    CHECK(b.trace.rows.back().q_inner_res > 0.0);
    CHECK(b.trace.rows.back().q_inner_res < 1e-9);
  }
}

TEST_CASE("custom projection callback is honored") {
  test::Rng rng(109);
  WllsProblem prob;
  prob.p1 = QMatrix::identity(2);
  prob.p2 = prob.p3 = prob.p4 = QMatrix::zero(2, 2);
  prob.y = rng.qvector(2, 2.0);
  prob.cone = ConstraintSet::custom;
  CHECK_THROWS_AS(wlls_solve(prob, {}, {}), std::invalid_argument);
  prob.custom_projection = [](const QVector& v) { return real_part(v); };
  AdmmConfig cfg;
  cfg.max_iter = 2000;
  cfg.eps_abs = 1e-10;
  cfg.eps_rel = 1e-9;
  const WllsResult res = wlls_solve(prob, cfg, {});
  CHECK(max_abs_diff(res.solution, real_part(prob.y)) < 1e-6);
}

TEST_CASE("constrained q-update: scalar hand computations") {
  // real dictionary: unconstrained solution 1/2, multiplier 1/4, solution 0
  {
    const BpdnQUpdate upd(QMatrix::identity(1), scalar_vec(Quaternion(1)), 1.0);
    const BpdnQUpdate::Update sol = upd.solve(QVector::zero(1));
    CHECK(sol.re_lambda[0] == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(norm2(sol.q) < 1e-14);
    CHECK(max_abs_diff(upd.apply_inverse(scalar_vec(Quaternion(1)))[0], Quaternion(0.5)) <
          1e-14);
  }
  // pure dictionary: the unconstrained solution is already feasible
  {
    QMatrix d(1, 1);
    d.set(0, 0, Quaternion::unit_i());
    const BpdnQUpdate upd(d, scalar_vec(Quaternion::unit_i()), 1.0);
    const BpdnQUpdate::Update sol = upd.solve(QVector::zero(1));
    CHECK(std::fabs(sol.re_lambda[0]) < 1e-14);
    CHECK(max_abs_diff(sol.q[0], Quaternion(0.5)) < 1e-14);
  }
}

TEST_CASE("constrained q-update matches the stacked-real equality-constrained solve") {
  test::Rng rng(110);
  for (int it = 0; it < 10; ++it) {
    const std::size_t m = 1 + rng.index(3);
    const std::size_t n = m + 1 + rng.index(3);
    const QMatrix d = rng.qmatrix(m, n);
    const QVector y = rng.qvector(m);
    const QVector v = rng.qvector(n);
    const double rho = 0.5 + rng.uniform();

    const BpdnQUpdate upd(d, y, rho);
    const BpdnQUpdate::Update sol = upd.solve(v);

    // saddle system [H T^T; T 0] in stacked-real coordinates; T is the
    // real-part map of the dictionary product
    const RealMatrix dr = to_aug_real_matrix(WidelyAffineMap::strictly_affine(
        d, QVector::zero(m))).a;
    RealMatrix h = transpose(dr) * dr;
    for (std::size_t t = 0; t < 4 * n; ++t) h(t, t) += rho;
    RealMatrix t_map(m, 4 * n);
    for (std::size_t r = 0; r < m; ++r) {
      for (std::size_t t = 0; t < n; ++t) {
        const Quaternion e = d.at(r, t);
        t_map(r, t) = e.a;
        t_map(r, n + t) = -e.b;
        t_map(r, 2 * n + t) = -e.c;
        t_map(r, 3 * n + t) = -e.d;
      }
    }
    const std::size_t dim = 4 * n + m;
    RealMatrix kkt(dim, dim);
    for (std::size_t i = 0; i < 4 * n; ++i) {
      for (std::size_t j = 0; j < 4 * n; ++j) kkt(i, j) = h(i, j);
      for (std::size_t r = 0; r < m; ++r) {
        kkt(i, 4 * n + r) = t_map(r, i);
        kkt(4 * n + r, i) = t_map(r, i);
      }
    }
    RealVector rhs(dim, 0.0);
    const RealVector top = matvec(transpose(dr), to_aug_real(y).data) + rho * to_aug_real(v).data;
    for (std::size_t i = 0; i < 4 * n; ++i) rhs[i] = top[i];
    const RealVector xs = test::oracle_solve(kkt, rhs);

    const RealVector q_aug = to_aug_real(sol.q).data;
    double scale = 1.0 + norm2(sol.q);
    for (std::size_t i = 0; i < 4 * n; ++i) {
      CHECK(std::fabs(q_aug[i] - xs[i]) < 1e-8 * scale);
    }
    // saddle multiplier is four times the stored real part
    for (std::size_t r = 0; r < m; ++r) {
      CHECK(std::fabs(xs[4 * n + r] - 4.0 * sol.re_lambda[r]) < 1e-8 * scale);
    }
  }
}

TEST_CASE("sparse recovery solve keeps iterates feasible and converges") {
  test::Rng rng(111);
  const BpdnInstance inst = make_pure_instance(4, 24, 0.1, 0.05, 99);
  const BpdnProblem prob{inst.d, inst.y, 0.05};
  AdmmConfig cfg;
  cfg.max_iter = 4000;
  cfg.eps_abs = 1e-9;
  cfg.eps_rel = 1e-8;
  const BpdnResult res = bpdn_solve(prob, cfg);
  CHECK(res.status == SolveStatus::converged);
  CHECK(res.max_re_violation < 1e-10);
  CHECK(res.re_violation_per_iter.size() == res.trace.rows.size());
  CHECK(norm2(res.q - res.p) < 1e-6);
  // the thresholded iterate is exactly sparse
  std::size_t nnz = 0;
  for (std::size_t t = 0; t < res.p.size(); ++t) {
    if (norm_sq(res.p[t]) > 0.0) ++nnz;
  }
  CHECK(nnz < res.p.size());
  CHECK_THROWS_AS(bpdn_solve({inst.d, inst.y, 0.0}, cfg), std::invalid_argument);
}

TEST_CASE("instance generator contract") {
  const BpdnInstance inst = make_pure_instance(10, 1000, 0.03, 0.1, 7);
  CHECK(inst.d.rows() == 10);
  CHECK(inst.d.cols() == 1000);

  // unit columns
  for (std::size_t j = 0; j < 1000; j += 137) {
    CHECK(norm2(column(inst.d, j)) == doctest::Approx(1.0).epsilon(1e-12));
  }
  // stated sparsity
  std::size_t nnz = 0;
  for (std::size_t t = 0; t < 1000; ++t) {
    if (norm_sq(inst.q0[t]) > 0.0) ++nnz;
  }
  CHECK(nnz == 30);
  // the synthesized signal is pure
  RealVector re(10);
  const QVector dq = matvec(inst.d, inst.q0);
  double viol = 0.0;
  for (std::size_t r = 0; r < 10; ++r) viol += dq[r].a * dq[r].a;
  CHECK(std::sqrt(viol) < 1e-12);
  // noise is pure as well
  for (std::size_t r = 0; r < 10; ++r) {
    CHECK((inst.y[r] - dq[r]).a == 0.0);
  }
}

TEST_CASE("instance generation is deterministic per seed") {
  const BpdnInstance a = make_pure_instance(5, 40, 0.1, 0.2, 42);
  const BpdnInstance b = make_pure_instance(5, 40, 0.1, 0.2, 42);
  CHECK(a.d.plane_a() == b.d.plane_a());
  CHECK(a.d.plane_b() == b.d.plane_b());
  CHECK(a.d.plane_c() == b.d.plane_c());
  CHECK(a.d.plane_d() == b.d.plane_d());
  CHECK(a.q0.plane_a() == b.q0.plane_a());
  CHECK(a.y.plane_a() == b.y.plane_a());
  CHECK(a.y.plane_d() == b.y.plane_d());

  const BpdnInstance c = make_pure_instance(5, 40, 0.1, 0.2, 43);
  CHECK(a.d.plane_a() != c.d.plane_a());

  // noiseless instances observe the signal exactly
  const BpdnInstance clean = make_pure_instance(5, 40, 0.1, 0.0, 42);
  const QVector dq = matvec(clean.d, clean.q0);
  CHECK(clean.y.plane_a() == dq.plane_a());
  CHECK(clean.y.plane_b() == dq.plane_b());

  CHECK_THROWS_AS(make_pure_instance(10, 10, 0.1, 0.1, 1), std::invalid_argument);
  CHECK_THROWS_AS(make_pure_instance(5, 40, 0.0, 0.1, 1), std::invalid_argument);
  CHECK_THROWS_AS(make_pure_instance(5, 40, 0.1, -0.1, 1), std::invalid_argument);
}

TEST_CASE("solver endpoints satisfy the optimality report") {
  test::Rng rng(112);
  // small sparse recovery instance, solved tightly, then checked against the
  // first-order machinery with the subgradient selected by the thresholding
  const BpdnInstance inst = make_pure_instance(3, 18, 0.15, 0.02, 5);
  const double beta = 0.08;
  const BpdnProblem prob{inst.d, inst.y, beta};
  AdmmConfig cfg;
  cfg.rho = 1.0;
  cfg.max_iter = 20000;
  cfg.eps_abs = 1e-12;
  cfg.eps_rel = 1e-11;
  const BpdnResult res = bpdn_solve(prob, cfg);

  ConvexProblem check;
  check.dim = inst.d.cols();
  const QMatrix d = inst.d;
  const QVector y = inst.y;
  const QVector subgrad = (cfg.rho / beta) * res.state.u;  // exact by the prox step
  check.objective.value = [d, y, beta](const QVector& q) {
    const double r = norm2(matvec(d, q) - y);
    return 0.5 * r * r + beta * l1_norm(q);
  };
  check.objective.analytic_conj_gradient = [d, y, beta, subgrad](const QVector& q) {
    return 0.25 * matvec(hermitian(d), matvec(d, q) - y) + (0.25 * beta) * subgrad;
  };
  check.equality = WidelyAffineMap{d, involution(d, CanonicalUnit::i),
                                   involution(d, CanonicalUnit::j),
                                   involution(d, CanonicalUnit::k),
                                   QVector::zero(inst.d.rows())};
  QVector lam(inst.d.rows());
  for (std::size_t t = 0; t < lam.size(); ++t) lam.set(t, Quaternion(res.re_lambda[t]));
  const KKTReport rep = kkt_report(check, {res.q, {}, lam});
  CHECK(rep.max_residual() < 1e-5);
}
