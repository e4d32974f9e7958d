#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rmpbe/parallel.hpp"
#include "rmpbe/perturb.hpp"
#include "rmpbe/rmp.hpp"
#include "rmpbe/types.hpp"

namespace rmpbe {

/// Coefficients of P(z) = (prod_j q_j(z)) G(z), the matrix polynomial
/// obtained by clearing all denominators; ascending powers.
std::vector<Matrix> clear_denominators(const Rmp& g);

struct SpectrumResult {
  std::vector<Complex> eigenvalues;
  // True when the eigenvalue sits at a root of some q_j, where denominator
  // clearing typically introduces spurious roots.
  std::vector<bool> pole_flags;
  int cleared_degree = 0;
};

/// Finite eigenvalues of G via the block-companion linearization of the
/// denominator-cleared polynomial, solved as a generalized eigenproblem.
/// Throws SingularRmp when P is numerically the zero polynomial.
SpectrumResult rmp_eigenvalues(const Rmp& g, const Tolerances& tol = {});

struct HomotopyStep {
  double t = 0.0;
  std::optional<SpectrumResult> spectrum;
  std::string error;  // set when the spectrum at this step is unavailable
};

/// Spectra along the segment from G to the perturbed polynomial
/// G - t * DeltaG, t on a uniform grid over [0, 1]. Per-step failures
/// (e.g. the zeroing perturbation making P identically zero) are recorded
/// in the step, not thrown.
std::vector<HomotopyStep> homotopy_curves(const Rmp& g, const PerturbationTuple& delta, int steps,
                                          ExecPolicy exec = ExecPolicy::Parallel,
                                          const Tolerances& tol = {});

}  // namespace rmpbe
