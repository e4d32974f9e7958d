#include "rmpbe/backerr.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>
#include <cmath>

#include "rmpbe/constraints.hpp"

namespace rmpbe {

std::string to_string(Exactness e) {
  switch (e) {
    case Exactness::exact: return "exact";
    case Exactness::lower_bound: return "lower_bound";
    case Exactness::boundary_fallback: return "boundary_fallback";
    case Exactness::eigenvalue_zero: return "eigenvalue_zero";
  }
  return "exact";
}

namespace {

void require_evaluable(const Rmp& g, Complex lambda, const Tolerances& tol) {
  if (g.is_pole(lambda, tol.pole_tol)) throw PoleAtPoint("lambda is a pole of the RMP");
}

// Certificate u = Lambda^* (x) x for the closed-form paths: the blocks are
// v_j = conj(Lambda_j) x, so v_lambda = ||Lambda||^2 x and the per-block
// mappings reproduce the sigma_min-based optimal perturbation.
Vector stacked_certificate(const RowVector& lam, const Vector& x) {
  const int blocks = static_cast<int>(lam.size());
  const int n = static_cast<int>(x.size());
  Vector u(blocks * n);
  for (int b = 0; b < blocks; ++b) u.segment(b * n, n) = std::conj(lam(b)) * x;
  return u / u.norm();
}

}  // namespace

BackwardErrorResult eta_unstructured(const Rmp& g, Complex lambda, const Tolerances& tol) {
  require_evaluable(g, lambda, tol);
  const RowVector lam = lambda_row(g, lambda, tol.pole_tol);
  const Matrix gl = g.eval(lambda, tol.pole_tol);
  Eigen::JacobiSVD<Matrix> svd(gl, Eigen::ComputeFullU | Eigen::ComputeFullV);

  BackwardErrorResult res;
  res.eta = svd.singularValues()(g.n() - 1) / lam.norm();
  res.exactness = Exactness::exact;
  res.structure = StructureTag::none;
  res.lambda = lambda;
  // Left singular vector of G(lambda) for sigma_min, stacked to blocks.
  res.certificate = stacked_certificate(lam, svd.matrixU().col(g.n() - 1));
  return res;
}

EigenpairBackwardError eta_eigenpair(const Rmp& g, Complex lambda, const Vector& x,
                                     const Tolerances& tol) {
  if (x.norm() == 0.0) throw ZeroVector("eigenpair backward error needs x != 0");
  require_evaluable(g, lambda, tol);

  const RowVector lam = lambda_row(g, lambda, tol.pole_tol);
  const Matrix gl = g.eval(lambda, tol.pole_tol);
  const Vector gx = gl * x;
  const double lam2 = lam.squaredNorm();

  EigenpairBackwardError out;
  out.value = gx.norm() / (x.norm() * lam.norm());
  out.tuple = PerturbationTuple::zero(g.n(), g.degree(), g.num_terms());
  const Matrix core = gx * x.adjoint() / (x.squaredNorm() * lam2);
  for (int p = 0; p <= g.degree(); ++p)
    out.tuple.dA[static_cast<std::size_t>(p)] = std::conj(lam(p)) * core;
  for (int j = 0; j < g.num_terms(); ++j)
    out.tuple.dE[static_cast<std::size_t>(j)] = std::conj(lam(g.degree() + 1 + j)) * core;
  out.tuple.tuple_norm = out.tuple.recompute_norm();
  return out;
}

namespace {

BackwardErrorResult from_unstructured(const Rmp& g, Complex lambda, StructureTag tag,
                                      Exactness exactness, const Tolerances& tol) {
  BackwardErrorResult res = eta_unstructured(g, lambda, tol);
  res.structure = tag;
  res.exactness = exactness;
  return res;
}

// Hermitian RMP at real lambda: G(lambda) is Hermitian and the optimal
// rank-one perturbation is already Hermitian when built from an
// eigenvector for the smallest-modulus eigenvalue.
BackwardErrorResult hermitian_real_lambda(const Rmp& g, Complex lambda, const Tolerances& tol) {
  const RowVector lam = lambda_row(g, lambda, tol.pole_tol);
  const Matrix gl = g.eval(lambda, tol.pole_tol);
  const Matrix gherm = 0.5 * (gl + gl.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(gherm);

  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < es.eigenvalues().size(); ++i)
    if (std::abs(es.eigenvalues()(i)) < std::abs(es.eigenvalues()(best))) best = i;

  BackwardErrorResult res;
  res.eta = std::abs(es.eigenvalues()(best)) / lam.norm();
  res.exactness = Exactness::exact;
  res.structure = StructureTag::hermitian;
  res.lambda = lambda;
  res.certificate = stacked_certificate(lam, es.eigenvectors().col(best));
  return res;
}

BackwardErrorResult optimization_result(Complex lambda, StructureTag tag,
                                        const OptResult& opt) {
  if (!(opt.value > 0.0))
    throw Error("eigenvalue optimization returned a non-positive optimum");
  BackwardErrorResult res;
  res.eta = 1.0 / std::sqrt(opt.value);
  res.exactness = opt.exact ? Exactness::exact : Exactness::lower_bound;
  res.structure = tag;
  res.lambda = lambda;
  res.t_hat = opt.t_hat;
  res.certificate = opt.certificate;
  res.diagnostics.gap = opt.gap;
  res.diagnostics.constraint_residuals = opt.constraint_residuals;
  res.diagnostics.solver_iterations = opt.iterations;
  return res;
}

}  // namespace

BackwardErrorResult eta_structured(const Rmp& g, Complex lambda, StructureTag tag,
                                   const OptOptions& opts, const Tolerances& tol) {
  require_evaluable(g, lambda, tol);
  {
    const StructureReport sr = validate_structure(g, tag, tol.structure_tol);
    if (!sr.valid)
      throw StructureMismatch("RMP does not satisfy the " + to_string(tag) + " structure");
  }

  const AdmissibilityReport adm = check_admissible(g, lambda, tol);
  if (!adm.weights_nonzero)
    throw Error("a weight vanishes at lambda; the structured formulas do not apply");
  if (adm.sigma_min <= 1e-12 * std::max(adm.norm, 1e-300)) {
    BackwardErrorResult res;
    res.eta = 0.0;
    res.exactness = Exactness::eigenvalue_zero;
    res.structure = tag;
    res.lambda = lambda;
    return res;
  }

  switch (tag) {
    case StructureTag::none:
      return from_unstructured(g, lambda, tag, Exactness::exact, tol);

    case StructureTag::symmetric:
      return from_unstructured(g, lambda, tag, Exactness::exact, tol);

    case StructureTag::hermitian: {
      if (std::abs(std::imag(lambda)) <= 1e-10 * (1.0 + std::abs(lambda)))
        return hermitian_real_lambda(g, lambda, tol);
      const ConstraintSystem sys = build_hermitian_system(g, lambda, tol);
      return optimization_result(lambda, tag, minimize_lambda_max(sys.J, sys.herm, opts));
    }

    case StructureTag::skew_hermitian: {
      const Rmp inner = hermitian_canonical_terms(transform(g, TransformKind::times_i),
                                                  tol.structure_tol);
      BackwardErrorResult res = eta_structured(inner, lambda, StructureTag::hermitian, opts, tol);
      res.structure = tag;
      return res;
    }

    case StructureTag::star_even:
    case StructureTag::star_odd: {
      const TransformKind kind = tag == StructureTag::star_even ? TransformKind::compose_iz
                                                                : TransformKind::i_compose_iz;
      const Rmp inner = hermitian_canonical_terms(transform(g, kind), tol.structure_tol);
      BackwardErrorResult res =
          eta_structured(inner, lambda / kImag, StructureTag::hermitian, opts, tol);
      res.structure = tag;
      res.lambda = lambda;
      return res;
    }

    case StructureTag::skew_symmetric: {
      const ConstraintSystem sys = build_skew_symmetric_system(g, lambda, tol);
      return optimization_result(lambda, tag, minimize_lambda2(sys.J, sys.sym, opts));
    }

    case StructureTag::t_even: {
      const ConstraintSystem sys = build_t_even_system(g, lambda, tol);
      return optimization_result(lambda, tag, minimize_lambda2(sys.J, sys.sym, opts));
    }

    case StructureTag::t_odd: {
      const ConstraintSystem sys = build_t_odd_system(g, lambda, tol);
      return optimization_result(lambda, tag, minimize_lambda2(sys.J, sys.sym, opts));
    }

    case StructureTag::t_palindromic: {
      try {
        const ConstraintSystem sys = build_palindromic_system(g, lambda, PalFlavor::Transpose, tol);
        return optimization_result(lambda, tag, minimize_lambda2(sys.J, sys.sym, opts));
      } catch (const CriticalLambda&) {
        return from_unstructured(g, lambda, tag, Exactness::boundary_fallback, tol);
      }
    }

    case StructureTag::star_palindromic: {
      try {
        const ConstraintSystem sys = build_palindromic_system(g, lambda, PalFlavor::Star, tol);
        return optimization_result(lambda, tag, minimize_lambda_max(sys.J, sys.herm, opts));
      } catch (const UnitCircleLambda&) {
        return from_unstructured(g, lambda, tag, Exactness::boundary_fallback, tol);
      }
    }
  }
  throw Error("unhandled structure tag");
}

}  // namespace rmpbe
