#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <functional>

#include "rmpbe/constraints.hpp"
#include "rmpbe/optim.hpp"
#include "rmpbe/rng.hpp"
#include "support/random_rmp.hpp"

using namespace rmpbe;
using namespace rmpbe::testsupport;

namespace {

Matrix diag2(double a, double b) {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}

Matrix offdiag2() {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 1) = 1.0;
  m(1, 0) = 1.0;
  return m;
}

// Coarse-to-fine dense grid minimization of a convex function on R^2; the
// final stage uses the target step. Valid because the objective is convex
// (zooming around the coarse argmin cannot lose the minimizer).
double grid_min_2d(const std::function<double(double, double)>& f, double radius,
                   double final_step) {
  double cx = 0.0, cy = 0.0, best = f(0.0, 0.0);
  double span = radius;
  for (double step : {radius / 40.0, radius / 400.0, final_step}) {
    double bx = cx, by = cy;
    for (double x = cx - span; x <= cx + span + 1e-15; x += step)
      for (double y = cy - span; y <= cy + span + 1e-15; y += step) {
        const double v = f(x, y);
        if (v < best) {
          best = v;
          bx = x;
          by = y;
        }
      }
    cx = bx;
    cy = by;
    span = 2.5 * step;
  }
  return best;
}

double grid_min_1d(const std::function<double(double)>& f, double radius, double final_step) {
  double c = 0.0, best = f(0.0);
  double span = radius;
  for (double step : {radius / 200.0, final_step}) {
    double b = c;
    for (double x = c - span; x <= c + span + 1e-15; x += step) {
      const double v = f(x);
      if (v < best) {
        best = v;
        b = x;
      }
    }
    c = b;
    span = 2.5 * step;
  }
  return best;
}

}  // namespace

TEST_CASE("lambda_max solver on closed-form instances") {
  {
    const Matrix j = diag2(2.0, 1.0);
    const std::vector<Matrix> h = {offdiag2()};
    const OptResult res = minimize_lambda_max(j, h);
    CHECK(res.value == doctest::Approx(2.0).epsilon(1e-8));
    CHECK(std::abs(res.t_hat(0)) < 1e-5);
    CHECK(res.exact);  // top eigenvalue 2 vs 1: simple
  }
  {
    const Matrix j = diag2(2.0, 0.0);
    const std::vector<Matrix> h = {diag2(1.0, -1.0)};
    const OptResult res = minimize_lambda_max(j, h);
    CHECK(res.value == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(res.t_hat(0) == doctest::Approx(-1.0).epsilon(1e-5));
    CHECK_FALSE(res.exact);  // kink: eigenvalues cross at the minimizer
  }
}

TEST_CASE("lambda_max solver matches dense grid search on a random system") {
  Rng rng(101);
  const Rmp g = random_structured_rmp(rng, StructureTag::hermitian, 2, 1, 0);
  const Complex lambda(0.3, 0.8);
  REQUIRE(check_admissible(g, lambda).admissible());
  const ConstraintSystem sys = build_hermitian_system(g, lambda);
  REQUIRE(sys.herm.size() == 2);

  const OptResult res = minimize_lambda_max(sys.J, sys.herm);
  const double oracle = grid_min_2d(
      [&](double a, double b) {
        RealVector t(2);
        t << a, b;
        return lambda_max_value(sys.J, sys.herm, t);
      },
      4.0, 1e-3);
  CHECK(res.value == doctest::Approx(oracle).epsilon(1e-4));
  CHECK(res.value <= oracle + 1e-6);  // solver should not be worse than the grid
}

TEST_CASE("lambda_max objective is convex along random probes") {
  Rng rng(103);
  const Rmp g = random_structured_rmp(rng, StructureTag::hermitian, 2, 1, 1);
  const Complex lambda(0.5, 0.6);
  const ConstraintSystem sys = build_hermitian_system(g, lambda);
  const int q = static_cast<int>(sys.herm.size());
  for (int rep = 0; rep < 100; ++rep) {
    const RealVector t1 = 3.0 * rng.normal_vector(q);
    const RealVector t2 = 3.0 * rng.normal_vector(q);
    const double mid = lambda_max_value(sys.J, sys.herm, RealVector(0.5 * (t1 + t2)));
    const double avg = 0.5 * (lambda_max_value(sys.J, sys.herm, t1) +
                              lambda_max_value(sys.J, sys.herm, t2));
    CHECK(mid <= avg + 1e-10);
  }
}

TEST_CASE("lambda2 solver on closed-form instances") {
  {
    // F(t) = [[I, tI],[tI, I]]: lambda_2 = 1 + |t|, minimum 1 at t = 0.
    const Matrix j = Matrix::Identity(2, 2);
    const std::vector<Matrix> s = {Matrix(Matrix::Identity(2, 2))};
    const OptResult res = minimize_lambda2(j, s);
    CHECK(res.value == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(std::abs(res.t_hat(0)) < 1e-6);
    // Degenerate top pair: any certificate must be isotropic.
    if (res.certificate) {
      const Complex quad = res.certificate->transpose() * *res.certificate;
      CHECK(std::abs(quad) < 1e-6);
    }
  }
  {
    const Matrix j = diag2(2.0, 1.0);
    const std::vector<Matrix> s = {offdiag2()};
    const OptResult res = minimize_lambda2(j, s);
    CHECK(res.value <= 2.0 + 1e-10);
    const double oracle = grid_min_1d(
        [&](double t) {
          RealVector tv(1);
          tv << t;
          return lambda2_value(j, s, tv);
        },
        4.0, 1e-3);
    CHECK(res.value == doctest::Approx(oracle).epsilon(1e-4));
  }
}

TEST_CASE("rank-deficient constraints are rejected") {
  const Matrix j = diag2(2.0, 1.0);
  Matrix rank1 = Matrix::Zero(2, 2);
  rank1(0, 0) = 1.0;
  CHECK_THROWS_AS(minimize_lambda2(j, {rank1}), RankDeficientConstraints);
}

TEST_CASE("lambda2 optimum beats fresh ball samples") {
  Rng rng(107);
  const Rmp g = random_structured_rmp(rng, StructureTag::skew_symmetric, 2, 1, 1);
  const Complex lambda = random_admissible_lambda(rng, g, StructureTag::skew_symmetric);
  const ConstraintSystem sys = build_skew_symmetric_system(g, lambda);

  const OptResult res = minimize_lambda2(sys.J, sys.sym);
  const Lambda2Ball ball = estimate_lambda2_ball(sys.J, sys.sym, 0);
  Rng fresh(0xf4e54123ULL);
  const int q = 2 * static_cast<int>(sys.sym.size()) - 1;
  for (int rep = 0; rep < 200; ++rep) {
    const RealVector t = fresh.ball(q, ball.beta);
    CHECK(res.value <= lambda2_value(sys.J, sys.sym, t) + 1e-8);
  }
}

TEST_CASE("certificate extraction on a skew-symmetric system") {
  Rng rng(109);
  const Rmp g = random_structured_rmp(rng, StructureTag::skew_symmetric, 2, 1, 0);
  const Complex lambda = random_admissible_lambda(rng, g, StructureTag::skew_symmetric);
  const ConstraintSystem sys = build_skew_symmetric_system(g, lambda);
  const OptResult res = minimize_lambda2(sys.J, sys.sym);
  if (res.certificate) {
    for (const Matrix& s : sys.sym) {
      const Complex quad = res.certificate->transpose() * (s * *res.certificate);
      CHECK(std::abs(quad) <= 1e-6);
    }
  }
  // Degenerate request: a gap below the simplicity threshold returns none.
  const Matrix j = Matrix::Identity(2, 2);
  const std::vector<Matrix> s1 = {Matrix(Matrix::Identity(2, 2))};
  RealVector t0 = RealVector::Zero(1);
  CHECK_FALSE(extract_certificate_sym(j, s1, t0).has_value());
}

TEST_CASE("solvers are deterministic and policy-independent") {
  Rng rng(113);
  const Rmp g = random_structured_rmp(rng, StructureTag::t_even, 2, 2, 1);
  const Complex lambda = random_admissible_lambda(rng, g, StructureTag::t_even);
  const ConstraintSystem sys = build_t_even_system(g, lambda);

  OptOptions serial, parallel;
  serial.seed = 42;
  serial.exec = ExecPolicy::Serial;
  parallel.seed = 42;
  parallel.exec = ExecPolicy::Parallel;

  const OptResult a = minimize_lambda2(sys.J, sys.sym, serial);
  const OptResult b = minimize_lambda2(sys.J, sys.sym, parallel);
  const OptResult c = minimize_lambda2(sys.J, sys.sym, parallel);

  CHECK(a.value == b.value);  // bitwise
  CHECK(b.value == c.value);
  REQUIRE(a.t_hat.size() == b.t_hat.size());
  for (Eigen::Index i = 0; i < a.t_hat.size(); ++i) {
    CHECK(a.t_hat(i) == b.t_hat(i));
    CHECK(b.t_hat(i) == c.t_hat(i));
  }
}
