#pragma once

#include <optional>
#include <vector>

#include "rmpbe/rmp.hpp"
#include "rmpbe/types.hpp"

namespace rmpbe {

/// Rayleigh-quotient reformulation data for one structure at one lambda:
/// Hermitian PSD objective J of size N = n(d+k+1) plus Hermitian and/or
/// complex-symmetric constraint matrices, with the optional palindromic
/// diagonal scaling Gamma. Certificate vectors u stack coefficient blocks
/// in the order (v_{A_0}, ..., v_{A_d}, v_{E_1}, ..., v_{E_k}).
struct ConstraintSystem {
  int n = 0;
  int d = 0;
  int k = 0;
  Matrix J;
  std::vector<Matrix> herm;
  std::vector<Matrix> sym;
  std::optional<RealVector> gamma;  // diagonal of Gamma, length N
  RowVector lambda_row;
  Matrix M;  // G(lambda)^{-1}

  int dim() const { return n * (d + k + 1); }
};

/// The row [1, lambda, ..., lambda^d, w_1(lambda), ..., w_k(lambda)].
RowVector lambda_row(const Rmp& g, Complex lambda, double pole_tol = 1e-12);

/// J = Lambda^* Lambda (x) M^* M, conjugated by Gamma^{-1} when present.
Matrix build_objective(const RowVector& lambda_row, const Matrix& M,
                       const RealVector* gamma = nullptr);

ConstraintSystem build_skew_symmetric_system(const Rmp& g, Complex lambda,
                                             const Tolerances& tol = {});
ConstraintSystem build_t_even_system(const Rmp& g, Complex lambda, const Tolerances& tol = {});
ConstraintSystem build_t_odd_system(const Rmp& g, Complex lambda, const Tolerances& tol = {});
ConstraintSystem build_hermitian_system(const Rmp& g, Complex lambda, const Tolerances& tol = {});

enum class PalFlavor { Star, Transpose };

ConstraintSystem build_palindromic_system(const Rmp& g, Complex lambda, PalFlavor flavor,
                                          const Tolerances& tol = {});

/// Kronecker product, block (i,j) = P(i,j) * Q.
Matrix kron(const Matrix& P, const Matrix& Q);

/// Palindromic diagonal scaling for degree d: entries
/// gamma_{j1} = sqrt(2/(1+|lambda|^{d-2j})) on block j and
/// gamma_{j2} = sqrt(2|lambda|^{d-2j}/(1+|lambda|^{d-2j})) on block d-j,
/// ones on the middle block (d even) and on all E blocks.
RealVector palindromic_gamma(int n, int d, int k, Complex lambda);

}  // namespace rmpbe
