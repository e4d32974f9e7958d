#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

#include "rmpbe/backerr.hpp"
#include "rmpbe/rng.hpp"
#include "rmpbe/spectrum.hpp"
#include "support/random_rmp.hpp"

using namespace rmpbe;
using namespace rmpbe::testsupport;

namespace {

Matrix ident(int n) { return Matrix::Identity(n, n); }

Matrix scalar(double v) {
  Matrix m(1, 1);
  m(0, 0) = v;
  return m;
}

bool contains(const std::vector<Complex>& eigs, Complex z, double tol) {
  return std::any_of(eigs.begin(), eigs.end(),
                     [&](Complex e) { return std::abs(e - z) <= tol; });
}

}  // namespace

TEST_CASE("clear_denominators closed forms") {
  // G = z - 2 + 1/z  ->  P = z^2 - 2z + 1.
  const Rmp g({scalar(-2.0), scalar(1.0)}, {{RationalScalarFn({1.0}, {0.0, 1.0}), scalar(1.0)}});
  const auto P = clear_denominators(g);
  REQUIRE(P.size() == 3);
  CHECK(std::abs(P[0](0, 0) - Complex(1.0)) < 1e-15);
  CHECK(std::abs(P[1](0, 0) - Complex(-2.0)) < 1e-15);
  CHECK(std::abs(P[2](0, 0) - Complex(1.0)) < 1e-15);

  // k = 0: unchanged.
  Rng rng(401);
  const Rmp poly({rng.complex_matrix(2, 2), rng.complex_matrix(2, 2)}, {});
  const auto P2 = clear_denominators(poly);
  REQUIRE(P2.size() == 2);
  CHECK((P2[0] - poly.A(0)).norm() < 1e-15);
  CHECK((P2[1] - poly.A(1)).norm() < 1e-15);
}

TEST_CASE("clear_denominators pointwise oracle") {
  Rng rng(409);
  const Rmp g = random_structured_rmp(rng, StructureTag::none, 2, 2, 2);
  const auto P = clear_denominators(g);
  for (int rep = 0; rep < 8; ++rep) {
    const Complex z = rng.complex_normal();
    if (g.is_pole(z, 1e-8)) continue;
    Complex qprod = 1.0;
    for (int j = 0; j < g.num_terms(); ++j) {
      const auto& q = g.term(j).w.denominator();
      Complex qv = 0.0;
      for (std::size_t i = 0; i < q.size(); ++i) qv += q[i] * std::pow(z, static_cast<double>(i));
      qprod *= qv;
    }
    Matrix pz = Matrix::Zero(2, 2);
    Complex zp = 1.0;
    for (const Matrix& coef : P) {
      pz += zp * coef;
      zp *= z;
    }
    const Matrix expect = qprod * g.eval(z);
    CHECK((pz - expect).norm() <= 1e-10 * (1.0 + expect.norm()));
  }
}

TEST_CASE("rmp_eigenvalues closed forms") {
  Matrix a0 = Matrix::Zero(2, 2);
  a0(0, 0) = -1.0;
  a0(1, 1) = -2.0;
  const Rmp pencil({a0, ident(2)}, {});
  const auto spec = rmp_eigenvalues(pencil);
  REQUIRE(spec.eigenvalues.size() == 2);
  CHECK(contains(spec.eigenvalues, Complex(1.0), 1e-10));
  CHECK(contains(spec.eigenvalues, Complex(2.0), 1e-10));
  CHECK(std::none_of(spec.pole_flags.begin(), spec.pole_flags.end(), [](bool b) { return b; }));

  // Scalar z - 2 + 1/z: double eigenvalue at 1; q root (0) is elsewhere.
  const Rmp g({scalar(-2.0), scalar(1.0)}, {{RationalScalarFn({1.0}, {0.0, 1.0}), scalar(1.0)}});
  const auto spec2 = rmp_eigenvalues(g);
  REQUIRE(spec2.eigenvalues.size() == 2);
  CHECK(std::abs(spec2.eigenvalues[0] - Complex(1.0)) < 1e-7);
  CHECK(std::abs(spec2.eigenvalues[1] - Complex(1.0)) < 1e-7);
  CHECK_FALSE(spec2.pole_flags[0]);

  // Numerically zero polynomial.
  const Rmp null_rmp({Matrix(1e-16 * ident(2))}, {});
  CHECK_THROWS_AS(rmp_eigenvalues(null_rmp), SingularRmp);
}

TEST_CASE("non-flagged eigenvalues are true eigenvalues (residual oracle)") {
  Rng rng(419);
  RationalScalarFn w1({1.0}, {1.0, 1.0});
  RationalScalarFn w2({1.0}, {2.0, 1.0});
  const Rmp g({random_hermitian(rng, 3), random_hermitian(rng, 3)},
              {{w1, random_hermitian(rng, 3)}, {w2, random_hermitian(rng, 3)}});
  const auto spec = rmp_eigenvalues(g);
  CHECK(static_cast<int>(spec.eigenvalues.size()) <= spec.cleared_degree * 3);
  int checked = 0;
  for (std::size_t i = 0; i < spec.eigenvalues.size(); ++i) {
    if (spec.pole_flags[i]) continue;
    const Matrix gl = g.eval(spec.eigenvalues[i]);
    Eigen::JacobiSVD<Matrix> svd(gl);
    CHECK(svd.singularValues()(2) <= 1e-8 * svd.singularValues()(0));
    ++checked;
  }
  CHECK(checked > 0);
}

TEST_CASE("hermitian spectra are conjugation symmetric") {
  Rng rng(421);
  const Rmp g = random_structured_rmp(rng, StructureTag::hermitian, 3, 1, 2);
  const auto spec = rmp_eigenvalues(g);
  for (std::size_t i = 0; i < spec.eigenvalues.size(); ++i) {
    if (spec.pole_flags[i]) continue;
    CHECK(contains(spec.eigenvalues, std::conj(spec.eigenvalues[i]), 1e-8));
  }
}

TEST_CASE("star-palindromic spectra pair across the unit circle") {
  Rng rng(431);
  const Rmp g = random_structured_rmp(rng, StructureTag::star_palindromic, 3, 1, 1);
  const auto spec = rmp_eigenvalues(g);
  int paired = 0;
  for (std::size_t i = 0; i < spec.eigenvalues.size(); ++i) {
    if (spec.pole_flags[i]) continue;
    const Complex z = spec.eigenvalues[i];
    if (std::abs(z) < 1e-6) continue;
    CHECK(contains(spec.eigenvalues, 1.0 / std::conj(z), 1e-6 * (1.0 + std::norm(1.0 / z))));
    ++paired;
  }
  CHECK(paired > 0);
}

TEST_CASE("homotopy grid: zero delta, zeroing delta, and optimal delta") {
  Rng rng(433);
  const Rmp g = random_structured_rmp(rng, StructureTag::hermitian, 2, 1, 1);

  const PerturbationTuple zero = PerturbationTuple::zero(2, 1, 1);
  const auto flat = homotopy_curves(g, zero, 3);
  REQUIRE(flat.size() == 3);
  for (const auto& step : flat) {
    REQUIRE(step.spectrum);
    CHECK(step.spectrum->eigenvalues == flat[0].spectrum->eigenvalues);
  }

  PerturbationTuple zeroing;
  zeroing.dA = g.coefficients();
  for (const RmpTerm& t : g.terms()) zeroing.dE.push_back(t.E);
  zeroing.tuple_norm = zeroing.recompute_norm();
  const auto wipe = homotopy_curves(g, zeroing, 3);
  CHECK_FALSE(wipe.back().spectrum.has_value());
  CHECK_FALSE(wipe.back().error.empty());
  CHECK(wipe.front().spectrum.has_value());

  // Optimal Hermitian perturbation: lambda enters the spectrum at t = 1.
  for (int attempt = 0; attempt < 10; ++attempt) {
    const Rmp h = random_structured_rmp(rng, StructureTag::hermitian, 2, 1, 1);
    const Complex lambda(0.25 + 0.05 * attempt, 0.45);
    if (!check_admissible(h, lambda).admissible()) continue;
    const auto res = eta_structured(h, lambda, StructureTag::hermitian);
    if (res.exactness != Exactness::exact) continue;
    const auto rec =
        reconstruct_perturbation(h, lambda, StructureTag::hermitian, *res.certificate);
    const auto path = homotopy_curves(h, rec.tuple, 5);
    REQUIRE(path.back().spectrum);
    CHECK(contains(path.back().spectrum->eigenvalues, lambda, 1e-6));
    return;
  }
  FAIL("no exact instance for the homotopy endpoint check");
}

TEST_CASE("homotopy policies agree") {
  Rng rng(439);
  const Rmp g = random_structured_rmp(rng, StructureTag::hermitian, 2, 1, 1);
  const PerturbationTuple zero = PerturbationTuple::zero(2, 1, 1);
  const auto serial = homotopy_curves(g, zero, 9, ExecPolicy::Serial);
  const auto parallel = homotopy_curves(g, zero, 9, ExecPolicy::Parallel);
  REQUIRE(serial.size() == parallel.size());
  for (std::size_t i = 0; i < serial.size(); ++i) {
    REQUIRE(serial[i].spectrum.has_value() == parallel[i].spectrum.has_value());
    if (serial[i].spectrum)
      CHECK(serial[i].spectrum->eigenvalues == parallel[i].spectrum->eigenvalues);
  }
}
