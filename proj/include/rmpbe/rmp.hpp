#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rmpbe/rational_fn.hpp"
#include "rmpbe/types.hpp"

namespace rmpbe {

enum class StructureTag {
  symmetric,
  skew_symmetric,
  t_even,
  t_odd,
  hermitian,
  skew_hermitian,
  star_even,
  star_odd,
  star_palindromic,
  t_palindromic,
  none,
};

std::string to_string(StructureTag tag);
std::optional<StructureTag> structure_from_string(const std::string& name);

struct RmpTerm {
  RationalScalarFn w;
  Matrix E;
};

/// Rational matrix polynomial G(z) = sum_p z^p A_p + sum_j w_j(z) E_j with
/// n x n complex coefficients. Immutable after construction.
class Rmp {
 public:
  Rmp(std::vector<Matrix> A, std::vector<RmpTerm> terms);

  int n() const { return n_; }
  int degree() const { return static_cast<int>(A_.size()) - 1; }
  int num_terms() const { return static_cast<int>(terms_.size()); }
  /// Number of coefficient blocks d + k + 1.
  int num_blocks() const { return degree() + num_terms() + 1; }

  const Matrix& A(int p) const { return A_[static_cast<std::size_t>(p)]; }
  const RmpTerm& term(int j) const { return terms_[static_cast<std::size_t>(j)]; }
  const std::vector<Matrix>& coefficients() const { return A_; }
  const std::vector<RmpTerm>& terms() const { return terms_; }

  Matrix eval(Complex z, double pole_tol = 1e-12) const;
  bool is_pole(Complex z, double pole_tol = 1e-12) const;

 private:
  int n_;
  std::vector<Matrix> A_;
  std::vector<RmpTerm> terms_;
};

struct AdmissibilityReport {
  bool pole_free = false;
  bool weights_nonzero = false;
  bool invertible = false;
  double sigma_min = 0.0;  // of G(lambda), when evaluable
  double norm = 0.0;       // spectral norm of G(lambda)
  bool admissible() const { return pole_free && weights_nonzero && invertible; }
};

/// Checks the three admissibility conditions required by the structured
/// backward-error formulas: lambda is not a pole, every weight value is
/// nonzero, and G(lambda) is invertible.
AdmissibilityReport check_admissible(const Rmp& g, Complex lambda, const Tolerances& tol = {});

struct StructureViolation {
  std::string block;
  double rel_error = 0.0;
};

struct StructureReport {
  bool valid = true;
  std::vector<StructureViolation> violations;
};

/// Verifies the coefficient relations of the given structure class on
/// every A_p and E_j, plus the weight symmetry required by the class.
StructureReport validate_structure(const Rmp& g, StructureTag tag, double tol = 1e-10);

/// Partition of term indices (0-based) by weight parity.
struct ParityPartition {
  std::vector<int> odd;   // indices j with w_j(-z) = -w_j(z)
  std::vector<int> even;  // indices j with w_j(-z) =  w_j(z)
  int r() const { return static_cast<int>(odd.size()); }
};

ParityPartition parity_partition(const Rmp& g, double tol = 1e-10);

enum class TransformKind { times_i, compose_iz, i_compose_iz };

/// times_i: i*G(z); compose_iz: G(iz); i_compose_iz: i*G(iz).
Rmp transform(const Rmp& g, TransformKind kind);

/// Rewrites terms whose weight satisfies (w(z))^* = -w(conj z) as
/// (i*w, -i*E), so a Hermitian-valued RMP is represented with real-type
/// weights and Hermitian E_j throughout. Needed after the *-even / *-odd
/// reductions before running the Hermitian machinery.
Rmp hermitian_canonical_terms(const Rmp& g, double tol = 1e-10);

}  // namespace rmpbe
