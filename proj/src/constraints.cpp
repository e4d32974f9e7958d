#include "rmpbe/constraints.hpp"

#include <Eigen/LU>
#include <cmath>

namespace rmpbe {

Matrix kron(const Matrix& P, const Matrix& Q) {
  Matrix out(P.rows() * Q.rows(), P.cols() * Q.cols());
  for (Eigen::Index i = 0; i < P.rows(); ++i)
    for (Eigen::Index j = 0; j < P.cols(); ++j)
      out.block(i * Q.rows(), j * Q.cols(), Q.rows(), Q.cols()) = P(i, j) * Q;
  return out;
}

RowVector lambda_row(const Rmp& g, Complex lambda, double pole_tol) {
  const int d = g.degree();
  const int k = g.num_terms();
  RowVector row(d + k + 1);
  Complex zp = 1.0;
  for (int p = 0; p <= d; ++p) {
    row(p) = zp;
    zp *= lambda;
  }
  for (int j = 0; j < k; ++j) row(d + 1 + j) = g.term(j).w.eval(lambda, pole_tol);
  return row;
}

Matrix build_objective(const RowVector& lam, const Matrix& M, const RealVector* gamma) {
  Matrix J = kron(lam.adjoint() * lam, M.adjoint() * M);
  if (gamma != nullptr) {
    for (Eigen::Index i = 0; i < J.rows(); ++i)
      for (Eigen::Index j = 0; j < J.cols(); ++j) J(i, j) /= (*gamma)(i) * (*gamma)(j);
  }
  // Scrub rounding so downstream eigensolvers see an exactly Hermitian matrix.
  J = 0.5 * (J + J.adjoint()).eval();
  return J;
}

namespace {

struct SystemBase {
  RowVector lam;
  Matrix M;
};

SystemBase prepare(const Rmp& g, Complex lambda, const Tolerances& tol) {
  const AdmissibilityReport adm = check_admissible(g, lambda, tol);
  if (!adm.pole_free) throw PoleAtPoint("lambda is a pole of the RMP");
  if (!adm.admissible()) throw Error("lambda is not admissible for the structured formulas");
  SystemBase base;
  base.lam = lambda_row(g, lambda, tol.pole_tol);
  base.M = g.eval(lambda, tol.pole_tol).partialPivLu().inverse();
  return base;
}

// C = Lambda^T e_{pos+1}^T (x) M^T for a 0-based block position.
Matrix bilinear_constraint(const RowVector& lam, int pos, const Matrix& M) {
  const int blocks = static_cast<int>(lam.size());
  Matrix sel = Matrix::Zero(blocks, blocks);
  // Lambda^T e^T is the rank-one matrix with column pattern Lambda^T at
  // column pos.
  for (int i = 0; i < blocks; ++i) sel(i, pos) = lam(i);
  return kron(sel, M.transpose());
}

// Builds S_p = C_p + C_p^T for each listed block position.
std::vector<Matrix> symmetric_constraints(const RowVector& lam, const Matrix& M,
                                          const std::vector<int>& positions) {
  std::vector<Matrix> out;
  out.reserve(positions.size());
  for (int pos : positions) {
    const Matrix c = bilinear_constraint(lam, pos, M);
    out.push_back(c + c.transpose());
  }
  return out;
}

// H = i(Lambda^* e^T (x) M^* - e Lambda (x) M) for a 0-based block position.
Matrix hermitian_constraint(const RowVector& lam, int pos, const Matrix& M) {
  const int blocks = static_cast<int>(lam.size());
  Matrix left = Matrix::Zero(blocks, blocks);
  Matrix right = Matrix::Zero(blocks, blocks);
  for (int i = 0; i < blocks; ++i) {
    left(i, pos) = std::conj(lam(i));
    right(pos, i) = lam(i);
  }
  Matrix h = kImag * (kron(left, Matrix(M.adjoint())) - kron(right, M));
  return 0.5 * (h + h.adjoint()).eval();
}

void scale_by_gamma(Matrix& m, const RealVector& gamma) {
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) /= gamma(i) * gamma(j);
}

}  // namespace

ConstraintSystem build_skew_symmetric_system(const Rmp& g, Complex lambda, const Tolerances& tol) {
  SystemBase base = prepare(g, lambda, tol);
  ConstraintSystem sys;
  sys.n = g.n();
  sys.d = g.degree();
  sys.k = g.num_terms();
  sys.lambda_row = base.lam;
  sys.M = base.M;
  std::vector<int> positions(static_cast<std::size_t>(sys.d + sys.k + 1));
  for (int p = 0; p < sys.d + sys.k + 1; ++p) positions[static_cast<std::size_t>(p)] = p;
  sys.sym = symmetric_constraints(base.lam, base.M, positions);
  sys.J = build_objective(base.lam, base.M);
  return sys;
}

ConstraintSystem build_t_even_system(const Rmp& g, Complex lambda, const Tolerances& tol) {
  if (std::abs(lambda) <= tol.unit_tol)
    throw Error("T-even backward error requires lambda != 0");
  SystemBase base = prepare(g, lambda, tol);
  const ParityPartition part = parity_partition(g, tol.structure_tol);

  ConstraintSystem sys;
  sys.n = g.n();
  sys.d = g.degree();
  sys.k = g.num_terms();
  sys.lambda_row = base.lam;
  sys.M = base.M;

  // Skew blocks: odd-power A_p, then E_j with odd weights.
  std::vector<int> positions;
  for (int p = 1; p <= sys.d; p += 2) positions.push_back(p);
  for (int j : part.odd) positions.push_back(sys.d + 1 + j);
  sys.sym = symmetric_constraints(base.lam, base.M, positions);
  sys.J = build_objective(base.lam, base.M);
  return sys;
}

ConstraintSystem build_t_odd_system(const Rmp& g, Complex lambda, const Tolerances& tol) {
  if (std::abs(lambda) <= tol.unit_tol)
    throw Error("T-odd backward error requires lambda != 0");
  SystemBase base = prepare(g, lambda, tol);
  const ParityPartition part = parity_partition(g, tol.structure_tol);

  ConstraintSystem sys;
  sys.n = g.n();
  sys.d = g.degree();
  sys.k = g.num_terms();
  sys.lambda_row = base.lam;
  sys.M = base.M;

  // Skew blocks: even-power A_p, then E_j with even weights (k - r of them).
  std::vector<int> positions;
  for (int p = 0; p <= sys.d; p += 2) positions.push_back(p);
  for (int j : part.even) positions.push_back(sys.d + 1 + j);
  sys.sym = symmetric_constraints(base.lam, base.M, positions);
  sys.J = build_objective(base.lam, base.M);
  return sys;
}

ConstraintSystem build_hermitian_system(const Rmp& g, Complex lambda, const Tolerances& tol) {
  if (std::abs(std::imag(lambda)) <= 1e-10 * (1.0 + std::abs(lambda)))
    throw RealLambdaShortcut("real lambda: Hermitian backward error equals the unstructured one");
  SystemBase base = prepare(g, lambda, tol);

  ConstraintSystem sys;
  sys.n = g.n();
  sys.d = g.degree();
  sys.k = g.num_terms();
  sys.lambda_row = base.lam;
  sys.M = base.M;
  for (int pos = 0; pos < sys.d + sys.k + 1; ++pos)
    sys.herm.push_back(hermitian_constraint(base.lam, pos, base.M));
  sys.J = build_objective(base.lam, base.M);
  return sys;
}

RealVector palindromic_gamma(int n, int d, int k, Complex lambda) {
  const int blocks = d + k + 1;
  RealVector diag = RealVector::Ones(blocks);
  const double mod = std::abs(lambda);
  const int m = d >= 1 ? (d - 1) / 2 : -1;  // floor((d-1)/2)
  for (int j = 0; j <= m; ++j) {
    const double pw = std::pow(mod, d - 2 * j);
    diag(j) = std::sqrt(2.0 / (1.0 + pw));
    diag(d - j) = std::sqrt(2.0 * pw / (1.0 + pw));
  }
  RealVector full(n * blocks);
  for (int b = 0; b < blocks; ++b) full.segment(b * n, n).setConstant(diag(b));
  return full;
}

ConstraintSystem build_palindromic_system(const Rmp& g, Complex lambda, PalFlavor flavor,
                                          const Tolerances& tol) {
  const double mod = std::abs(lambda);
  if (mod <= tol.unit_tol) throw Error("palindromic backward error requires lambda != 0");
  if (flavor == PalFlavor::Star) {
    if (std::abs(mod - 1.0) <= tol.unit_tol)
      throw UnitCircleLambda("|lambda| = 1: *-palindromic error equals the unstructured one");
  } else {
    if (std::abs(lambda - Complex(1.0)) <= tol.unit_tol ||
        std::abs(lambda + Complex(1.0)) <= tol.unit_tol)
      throw CriticalLambda("lambda = +-1: T-palindromic error equals the unstructured one");
  }

  SystemBase base = prepare(g, lambda, tol);
  ConstraintSystem sys;
  sys.n = g.n();
  sys.d = g.degree();
  sys.k = g.num_terms();
  sys.lambda_row = base.lam;
  sys.M = base.M;
  sys.gamma = palindromic_gamma(sys.n, sys.d, sys.k, lambda);

  const int d = sys.d;
  const int k = sys.k;
  const int blocks = d + k + 1;
  const int m = d >= 1 ? (d - 1) / 2 : -1;

  // Ctilde_p = Lambda^bullet e_{p+1}^bullet (x) M^bullet - e_{d-p+1} Lambda (x) M.
  auto pair_constraint = [&](int p, bool star) {
    Matrix left = Matrix::Zero(blocks, blocks);
    Matrix right = Matrix::Zero(blocks, blocks);
    for (int i = 0; i < blocks; ++i) {
      left(i, p) = star ? std::conj(base.lam(i)) : base.lam(i);
      right(d - p, i) = base.lam(i);
    }
    const Matrix mb = star ? Matrix(base.M.adjoint()) : Matrix(base.M.transpose());
    return Matrix(kron(left, mb) - kron(right, base.M));
  };

  if (flavor == PalFlavor::Star) {
    std::vector<Matrix> herm(static_cast<std::size_t>(d + k + 1));
    for (int p = 0; p <= m; ++p) {
      const Matrix c = pair_constraint(p, true);
      Matrix hp = c + c.adjoint();
      Matrix hd = kImag * (c - c.adjoint());
      scale_by_gamma(hp, *sys.gamma);
      scale_by_gamma(hd, *sys.gamma);
      herm[static_cast<std::size_t>(p)] = 0.5 * (hp + hp.adjoint());
      herm[static_cast<std::size_t>(d - p)] = 0.5 * (hd + hd.adjoint());
    }
    if (d % 2 == 0) {
      Matrix hm = hermitian_constraint(base.lam, d / 2, base.M);
      scale_by_gamma(hm, *sys.gamma);
      herm[static_cast<std::size_t>(d / 2)] = hm;
    }
    for (int j = 0; j < k; ++j) {
      Matrix he = hermitian_constraint(base.lam, d + 1 + j, base.M);
      scale_by_gamma(he, *sys.gamma);
      herm[static_cast<std::size_t>(d + 1 + j)] = he;
    }
    sys.herm = std::move(herm);
  } else {
    for (int p = 0; p <= m; ++p) {
      const Matrix c = pair_constraint(p, false);
      Matrix sp = c + c.transpose();
      scale_by_gamma(sp, *sys.gamma);
      sys.sym.push_back(0.5 * (sp + sp.transpose()));
    }
  }

  sys.J = build_objective(base.lam, base.M, &*sys.gamma);
  return sys;
}

}  // namespace rmpbe
