#pragma once

#include "rmpbe/types.hpp"

namespace rmpbe {

struct MappingResult {
  Matrix delta;
  double norm = 0.0;  // spectral norm of delta
};

/// Minimal spectral-norm symmetric map with delta * x = y,
/// norm ||y||/||x||. No feasibility restriction.
MappingResult map_symmetric(const Vector& x, const Vector& y);

/// Minimal spectral-norm skew-symmetric map; requires x^T y = 0.
MappingResult map_skew_symmetric(const Vector& x, const Vector& y, double tol = 1e-8);

/// Minimal spectral-norm Hermitian map; requires Im(x^* y) = 0.
MappingResult map_hermitian(const Vector& x, const Vector& y, double tol = 1e-8);

enum class TwoSidedFlavor { Star, Transpose };

/// Minimal spectral-norm map with delta * x = y1 and delta^bullet * x = y2
/// (bullet = conjugate transpose or plain transpose). Feasibility:
/// y1^* x = x^* y2 (star) or y1^T x = x^T y2 (transpose). Achieves
/// norm max(||y1||, ||y2||)/||x|| via a norm-preserving completion of the
/// partially specified operator.
MappingResult map_two_sided(const Vector& x, const Vector& y1, const Vector& y2,
                            TwoSidedFlavor flavor, double tol = 1e-8);

}  // namespace rmpbe
