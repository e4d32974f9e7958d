#pragma once

#include <optional>

#include "rmpbe/optim.hpp"
#include "rmpbe/perturb.hpp"
#include "rmpbe/rmp.hpp"
#include "rmpbe/types.hpp"

namespace rmpbe {

enum class Exactness { exact, lower_bound, boundary_fallback, eigenvalue_zero };

std::string to_string(Exactness e);

struct Diagnostics {
  double gap = 0.0;
  RealVector constraint_residuals;
  int solver_iterations = 0;
};

struct BackwardErrorResult {
  double eta = 0.0;
  Exactness exactness = Exactness::exact;
  StructureTag structure = StructureTag::none;
  Complex lambda{};
  RealVector t_hat;
  std::optional<Vector> certificate;
  Diagnostics diagnostics;
};

/// Unstructured eigenvalue backward error
/// sigma_min(G(lambda)) / ||(1, lambda, ..., lambda^d, w_1, ..., w_k)||.
BackwardErrorResult eta_unstructured(const Rmp& g, Complex lambda, const Tolerances& tol = {});

struct EigenpairBackwardError {
  double value = 0.0;
  PerturbationTuple tuple;  // rank-one optimal perturbation
};

/// Eigenpair backward error ||G(lambda)x|| / (||x|| ||Lambda||) together
/// with the rank-one perturbation achieving it.
EigenpairBackwardError eta_eigenpair(const Rmp& g, Complex lambda, const Vector& x,
                                     const Tolerances& tol = {});

/// Structure-preserving eigenvalue backward error. Dispatches per tag:
/// closed forms where structured and unstructured errors agree, the
/// lambda_max optimization for Hermitian-type constraints, the lambda_2
/// optimization for symmetric-type constraints, and the i / iz reductions
/// for skew-Hermitian, *-even and *-odd.
BackwardErrorResult eta_structured(const Rmp& g, Complex lambda, StructureTag tag,
                                   const OptOptions& opts = {}, const Tolerances& tol = {});

}  // namespace rmpbe
