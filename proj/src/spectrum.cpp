#include "rmpbe/spectrum.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#ifdef RMPBE_HAVE_LAPACKE
#include <lapacke.h>
#endif

namespace rmpbe {

std::vector<Matrix> clear_denominators(const Rmp& g) {
  const int n = g.n();
  const int k = g.num_terms();

  // prod_j q_j and the deleted products prod_{i != j} q_i.
  std::vector<Complex> qprod = {Complex(1.0)};
  for (int j = 0; j < k; ++j) qprod = poly::mul(qprod, g.term(j).w.denominator());

  int out_degree = static_cast<int>(qprod.size()) - 1 + g.degree();
  for (int j = 0; j < k; ++j) {
    const int dj = static_cast<int>(qprod.size()) - 1 -
                   g.term(j).w.den_degree() + g.term(j).w.num_degree();
    out_degree = std::max(out_degree, dj);
  }

  std::vector<Matrix> P(static_cast<std::size_t>(out_degree) + 1, Matrix::Zero(n, n));
  for (std::size_t c = 0; c < qprod.size(); ++c)
    for (int p = 0; p <= g.degree(); ++p) P[c + static_cast<std::size_t>(p)] += qprod[c] * g.A(p);

  for (int j = 0; j < k; ++j) {
    std::vector<Complex> rest = {Complex(1.0)};
    for (int i = 0; i < k; ++i)
      if (i != j) rest = poly::mul(rest, g.term(i).w.denominator());
    const std::vector<Complex> coef = poly::mul(g.term(j).w.numerator(), rest);
    for (std::size_t c = 0; c < coef.size(); ++c) P[c] += coef[c] * g.term(j).E;
  }

  // Trim trailing blocks that vanished in the products.
  double maxnorm = 0.0;
  for (const Matrix& m : P) maxnorm = std::max(maxnorm, m.norm());
  while (P.size() > 1 && P.back().norm() <= 1e-14 * maxnorm) P.pop_back();
  return P;
}

namespace {

#ifdef RMPBE_HAVE_LAPACKE
// Generalized eigenvalues of (A, B) via zggev; infinite eigenvalues
// (|beta| ~ 0) are dropped.
std::vector<Complex> pencil_eigenvalues(Matrix A, Matrix B) {
  const int n = static_cast<int>(A.rows());
  std::vector<Complex> alpha(static_cast<std::size_t>(n)), beta(static_cast<std::size_t>(n));
  const double scale = std::max({A.norm(), B.norm(), 1e-300});
  const int info = LAPACKE_zggev(
      LAPACK_COL_MAJOR, 'N', 'N', n, reinterpret_cast<lapack_complex_double*>(A.data()), n,
      reinterpret_cast<lapack_complex_double*>(B.data()), n,
      reinterpret_cast<lapack_complex_double*>(alpha.data()),
      reinterpret_cast<lapack_complex_double*>(beta.data()), nullptr, n, nullptr, n);
  if (info != 0) throw Error("zggev failed with info " + std::to_string(info));

  std::vector<Complex> eigs;
  for (int i = 0; i < n; ++i) {
    const std::size_t ii = static_cast<std::size_t>(i);
    if (std::abs(beta[ii]) <= 1e-12 * (std::abs(alpha[ii]) + scale)) continue;  // infinite
    eigs.push_back(alpha[ii] / beta[ii]);
  }
  return eigs;
}
#endif

}  // namespace

SpectrumResult rmp_eigenvalues(const Rmp& g, const Tolerances& tol) {
  std::vector<Matrix> P = clear_denominators(g);
  const int n = g.n();

  double maxnorm = 0.0;
  for (const Matrix& m : P) maxnorm = std::max(maxnorm, m.norm());
  if (maxnorm <= 1e-14) throw SingularRmp("cleared polynomial is numerically zero");

  // Deflate a numerically vanishing leading coefficient.
  while (P.size() > 1 && P.back().norm() <= 1e-12 * maxnorm) P.pop_back();

  const int deg = static_cast<int>(P.size()) - 1;
  SpectrumResult out;
  out.cleared_degree = deg;

  std::vector<Complex> eigs;
  if (deg == 0) {
    // Constant nonzero polynomial: no finite eigenvalues unless singular.
    Eigen::JacobiSVD<Matrix> svd(P[0]);
    if (svd.singularValues()(n - 1) <= 1e-12 * svd.singularValues()(0))
      throw SingularRmp("constant cleared polynomial is singular");
  } else {
    // First companion form At - z B acting on [v, z v, ..., z^(deg-1) v].
    const int N = deg * n;
    Matrix At = Matrix::Zero(N, N);
    Matrix B = Matrix::Identity(N, N);
    for (int b = 0; b + 1 < deg; ++b) At.block(b * n, (b + 1) * n, n, n) = Matrix::Identity(n, n);
    for (int b = 0; b < deg; ++b)
      At.block((deg - 1) * n, b * n, n, n) = -P[static_cast<std::size_t>(b)];
    B.block((deg - 1) * n, (deg - 1) * n, n, n) = P[static_cast<std::size_t>(deg)];

#ifdef RMPBE_HAVE_LAPACKE
    eigs = pencil_eigenvalues(At, B);
#else
    // Fallback without LAPACKE: requires an invertible leading block.
    Eigen::PartialPivLU<Matrix> lu(P[static_cast<std::size_t>(deg)]);
    Matrix C = Matrix::Zero(N, N);
    for (int b = 0; b + 1 < deg; ++b) C.block(b * n, (b + 1) * n, n, n) = Matrix::Identity(n, n);
    for (int b = 0; b < deg; ++b)
      C.block((deg - 1) * n, b * n, n, n) = -lu.solve(P[static_cast<std::size_t>(b)]);
    Eigen::ComplexEigenSolver<Matrix> es(C, false);
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
      eigs.push_back(es.eigenvalues()(i));
#endif
  }

  std::stable_sort(eigs.begin(), eigs.end(), [](const Complex& a, const Complex& b) {
    if (std::real(a) != std::real(b)) return std::real(a) < std::real(b);
    return std::imag(a) < std::imag(b);
  });

  out.eigenvalues = std::move(eigs);
  out.pole_flags.resize(out.eigenvalues.size(), false);
  for (std::size_t i = 0; i < out.eigenvalues.size(); ++i) {
    for (int j = 0; j < g.num_terms(); ++j) {
      const auto& q = g.term(j).w.denominator();
      const double scale = poly::abs_horner(q, std::abs(out.eigenvalues[i]));
      if (std::abs(poly::horner(q, out.eigenvalues[i])) <= 1e-8 * std::max(scale, 1e-300)) {
        out.pole_flags[i] = true;
        break;
      }
    }
  }
  return out;
}

std::vector<HomotopyStep> homotopy_curves(const Rmp& g, const PerturbationTuple& delta, int steps,
                                          ExecPolicy exec, const Tolerances& tol) {
  if (steps < 2) throw Error("homotopy needs at least 2 steps");
  std::vector<HomotopyStep> out(static_cast<std::size_t>(steps));

  parallel_for(static_cast<std::size_t>(steps), exec, [&](std::size_t s) {
    const double t = static_cast<double>(s) / static_cast<double>(steps - 1);
    out[s].t = t;
    std::vector<Matrix> A = g.coefficients();
    std::vector<RmpTerm> terms = g.terms();
    for (std::size_t p = 0; p < A.size(); ++p) A[p] -= t * delta.dA[p];
    for (std::size_t j = 0; j < terms.size(); ++j) terms[j].E -= t * delta.dE[j];
    try {
      out[s].spectrum = rmp_eigenvalues(Rmp(std::move(A), std::move(terms)), tol);
    } catch (const Error& e) {
      out[s].error = e.what();
    }
  });
  return out;
}

}  // namespace rmpbe
