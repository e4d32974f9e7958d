#pragma once

#include <vector>

#include "rmpbe/parallel.hpp"
#include "rmpbe/perturb.hpp"
#include "rmpbe/rmp.hpp"
#include "rmpbe/types.hpp"

namespace rmpbe {

struct OracleOptions {
  int restarts = 200;
  std::uint64_t seed = 0;
  ExecPolicy exec = ExecPolicy::Parallel;
  int max_problem_dim = 12;  // guard on n (d + k + 1)
};

struct OracleResult {
  double eta = 0.0;            // best certified upper bound found
  double best_residual = 0.0;  // sigma_min / ||G|| at the best point
  int successes = 0;           // restarts that reached a singular perturbation
  PerturbationTuple tuple;     // the best perturbation found
};

/// Real basis of the structure-preserving perturbation class: each element
/// is a tuple direction; perturbations are real linear combinations.
std::vector<PerturbationTuple> structured_basis(const Rmp& g, StructureTag tag,
                                                double tol = 1e-10);

/// Brute-force estimate of the structured backward error, independent of
/// the formula-based path: multi-restart penalty minimization of the tuple
/// norm against sigma_min(G(lambda) - DeltaG(lambda)), followed by a ray
/// polish onto the singular set. Throws TooLarge when n(d+k+1) exceeds the
/// guard.
OracleResult oracle_eta(const Rmp& g, Complex lambda, StructureTag tag,
                        const OracleOptions& opts = {});

}  // namespace rmpbe
