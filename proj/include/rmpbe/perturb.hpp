#pragma once

#include <optional>
#include <vector>

#include "rmpbe/rmp.hpp"
#include "rmpbe/types.hpp"

namespace rmpbe {

/// Coefficient-wise perturbation (dA_0, ..., dA_d, dE_1, ..., dE_k) with
/// the root-sum-square spectral block norm of Definition 1.
struct PerturbationTuple {
  std::vector<Matrix> dA;
  std::vector<Matrix> dE;
  double tuple_norm = 0.0;

  static PerturbationTuple zero(int n, int d, int k);
  double recompute_norm() const;
  /// Delta G(z) = sum_p z^p dA_p + sum_j w_j(z) dE_j with the weights of g.
  Matrix eval(const Rmp& g, Complex z, double pole_tol = 1e-12) const;
  PerturbationTuple scaled(double s) const;
};

struct ReconstructOutcome {
  PerturbationTuple tuple;
  /// Largest relative change made by the final structure projection.
  double projection_shift = 0.0;
};

/// Rebuilds the minimal-norm structure-preserving perturbation from a
/// certificate vector: unpacks v = Gamma^{-1} u into coefficient blocks,
/// forms x = G(lambda)^{-1} v_lambda, and applies the per-block structured
/// mappings. The resulting tuple satisfies det(G(lambda) - DeltaG(lambda))
/// = 0 and has tuple_norm equal to the reported backward error.
ReconstructOutcome reconstruct_perturbation(const Rmp& g, Complex lambda, StructureTag tag,
                                            const Vector& certificate,
                                            const std::optional<RealVector>& gamma = std::nullopt,
                                            const Tolerances& tol = {});

struct VerificationReport {
  double singularity_residual = 0.0;  // sigma_min(G - DeltaG) / ||G|| at lambda
  std::vector<StructureViolation> structure_violations;
  double max_structure_violation = 0.0;
  double tuple_norm = 0.0;
};

VerificationReport verify_perturbation(const Rmp& g, Complex lambda, StructureTag tag,
                                       const PerturbationTuple& delta,
                                       const Tolerances& tol = {});

}  // namespace rmpbe
