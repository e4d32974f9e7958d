#pragma once

#include <optional>
#include <vector>

#include "rmpbe/parallel.hpp"
#include "rmpbe/types.hpp"

namespace rmpbe {

struct OptOptions {
  std::uint64_t seed = 0;
  ExecPolicy exec = ExecPolicy::Parallel;
  int random_starts = 32;       // lambda2 solver; one extra start at t = 0
  double cert_tol = 1e-6;       // constraint residual acceptance, unit certificate
  double simplicity_base = 1e-8;  // simplicity_tol = base * (1 + |value|)
  int max_iterations = 4000;    // total inner iterations before giving up
};

struct OptResult {
  RealVector t_hat;
  double value = 0.0;
  double gap = 0.0;  // distance from the optimal eigenvalue to its neighbours
  std::optional<Vector> certificate;
  RealVector constraint_residuals;
  bool exact = false;
  int iterations = 0;
};

/// Global minimum of the convex map t -> lambda_max(J + sum_j t_j H_j)
/// for Hermitian J, H_j. Solved by log-sum-exp smoothing with a decreasing
/// temperature and BFGS inner iterations; at the minimizer with a simple
/// top eigenvalue the eigenvector satisfies u^* H_j u = 0 and is returned
/// as the certificate.
OptResult minimize_lambda_max(const Matrix& J, const std::vector<Matrix>& H,
                              const OptOptions& opts = {});

/// Approximate global minimum of t -> lambda_2(F(t)) with
/// F(t) = [[J, conj(f(t))], [f(t), conj(J)]] and
/// f(t) = (t_0 + i t_1) S_0 + ... + t_{2r} S_r over t in R^{2r+1}.
/// Multi-start Nelder-Mead inside the attainment ball, polished by
/// eigenvector-gradient descent while the eigenvalue stays simple.
OptResult minimize_lambda2(const Matrix& J, const std::vector<Matrix>& S,
                           const OptOptions& opts = {});

/// From the lambda_2 eigenvector w = (w1; w2) of F(t_hat), searches the
/// candidate family {w1, conj(w2), combinations e^{i theta} w1 +
/// e^{-i theta} conj(w2)} for a vector with u^T S_j u ~ 0 for all j.
std::optional<Vector> extract_certificate_sym(const Matrix& J, const std::vector<Matrix>& S,
                                              const RealVector& t_hat, double cert_tol = 1e-6,
                                              double simplicity_base = 1e-8);

// Objective evaluation helpers (also used by test oracles).
double lambda_max_value(const Matrix& J, const std::vector<Matrix>& H, const RealVector& t);
Matrix assemble_f(const std::vector<Matrix>& S, const RealVector& t);
Matrix assemble_F(const Matrix& J, const Matrix& f);
double lambda2_value(const Matrix& J, const std::vector<Matrix>& S, const RealVector& t);

struct Lambda2Ball {
  double beta = 0.0;  // safe search radius
  double c = 0.0;     // estimated min of sigma_2(f(t)) on the unit sphere
};

/// Estimates the attainment ball radius beta = 2 (lmax(J) - lmin(J)) / c.
/// Throws RankDeficientConstraints when sigma_2(f(t)) vanishes on the
/// sphere (rank(f) < 2 for some direction).
Lambda2Ball estimate_lambda2_ball(const Matrix& J, const std::vector<Matrix>& S,
                                  std::uint64_t seed, ExecPolicy exec = ExecPolicy::Parallel);

}  // namespace rmpbe
