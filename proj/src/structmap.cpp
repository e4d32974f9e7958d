#include "rmpbe/structmap.hpp"

#include <Eigen/SVD>
#include <cmath>

namespace rmpbe {

namespace {

double spectral_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  return Eigen::JacobiSVD<Matrix>(m).singularValues()(0);
}

void require_nonzero(const Vector& x) {
  if (x.norm() == 0.0) throw ZeroVector("mapping anchor vector is zero");
}

MappingResult finish(Matrix delta) {
  MappingResult res;
  res.norm = spectral_norm(delta);
  res.delta = std::move(delta);
  return res;
}

// Minimal-norm completion of the operator with prescribed action
// delta * xh = a and co-action delta^* yh = c (unit anchors): the
// Davis-Kahan-Weinberger central solution, norm max(||a||, ||c||).
Matrix dkw_completion(const Vector& xh, const Vector& yh, const Vector& a, const Vector& c) {
  const Complex alpha = yh.adjoint() * a;
  const Vector u = a - alpha * yh;
  const Vector r = c - std::conj(alpha) * xh;
  const double mu2 = std::max(a.squaredNorm(), c.squaredNorm());

  Matrix delta = alpha * (yh * xh.adjoint()) + u * xh.adjoint() + yh * r.adjoint();
  const double denom = mu2 - std::norm(alpha);
  if (denom > 1e-14 * std::max(mu2, 1e-300)) delta -= (std::conj(alpha) / denom) * (u * r.adjoint());
  return delta;
}

// Two-sided solution for delta * x = y1, delta^bullet * x = y2 on a general
// (not necessarily unit) anchor. For the transpose flavor the co-action
// constraint x^T delta = y2^T reads delta^* conj(x) = conj(y2).
Matrix two_sided_core(const Vector& x, const Vector& y1, const Vector& y2,
                      TwoSidedFlavor flavor) {
  const double nx = x.norm();
  const Vector xh = x / nx;
  const Vector yh = (flavor == TwoSidedFlavor::Star) ? xh : Vector(xh.conjugate());
  const Vector a = y1 / nx;
  const Vector c =
      (flavor == TwoSidedFlavor::Star) ? Vector(y2 / nx) : Vector(y2.conjugate() / nx);
  return dkw_completion(xh, yh, a, c);
}

}  // namespace

MappingResult map_symmetric(const Vector& x, const Vector& y) {
  require_nonzero(x);
  // delta^T x = y as well, so the symmetric part of the two-sided solution
  // still maps x to y and keeps the minimal norm ||y||/||x||.
  const Matrix d = two_sided_core(x, y, y, TwoSidedFlavor::Transpose);
  return finish(0.5 * (d + d.transpose()));
}

MappingResult map_skew_symmetric(const Vector& x, const Vector& y, double tol) {
  require_nonzero(x);
  const Complex xty = x.transpose() * y;
  if (std::abs(xty) > tol * x.norm() * y.norm())
    throw ConstraintViolated("skew-symmetric mapping requires x^T y = 0");
  const Matrix d = two_sided_core(x, y, Vector(-y), TwoSidedFlavor::Transpose);
  return finish(0.5 * (d - d.transpose()));
}

MappingResult map_hermitian(const Vector& x, const Vector& y, double tol) {
  require_nonzero(x);
  const Complex xsy = x.adjoint() * y;
  if (std::abs(std::imag(xsy)) > tol * x.norm() * y.norm())
    throw ConstraintViolated("Hermitian mapping requires x^* y real");
  const Matrix d = two_sided_core(x, y, y, TwoSidedFlavor::Star);
  return finish(0.5 * (d + d.adjoint()));
}

MappingResult map_two_sided(const Vector& x, const Vector& y1, const Vector& y2,
                            TwoSidedFlavor flavor, double tol) {
  require_nonzero(x);
  const double nx = x.norm();

  if (flavor == TwoSidedFlavor::Star) {
    const Complex lhs = y1.adjoint() * x;
    const Complex rhs = x.adjoint() * y2;
    if (std::abs(lhs - rhs) > tol * nx * std::max(1.0, std::max(y1.norm(), y2.norm())))
      throw ConstraintViolated("two-sided star mapping requires y1^* x = x^* y2");
  } else {
    const Complex lhs = y1.transpose() * x;
    const Complex rhs = x.transpose() * y2;
    if (std::abs(lhs - rhs) > tol * nx * std::max(1.0, std::max(y1.norm(), y2.norm())))
      throw ConstraintViolated("two-sided transpose mapping requires y1^T x = x^T y2");
  }
  return finish(two_sided_core(x, y1, y2, flavor));
}

}  // namespace rmpbe
