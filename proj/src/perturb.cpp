#include "rmpbe/perturb.hpp"

#include <Eigen/LU>
#include <Eigen/SVD>
#include <cmath>

#include "rmpbe/constraints.hpp"
#include "rmpbe/structmap.hpp"

namespace rmpbe {

namespace {

double spectral_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  return Eigen::JacobiSVD<Matrix>(m).singularValues()(0);
}

}  // namespace

PerturbationTuple PerturbationTuple::zero(int n, int d, int k) {
  PerturbationTuple t;
  t.dA.assign(static_cast<std::size_t>(d) + 1, Matrix::Zero(n, n));
  t.dE.assign(static_cast<std::size_t>(k), Matrix::Zero(n, n));
  t.tuple_norm = 0.0;
  return t;
}

double PerturbationTuple::recompute_norm() const {
  double acc = 0.0;
  for (const Matrix& m : dA) acc += std::pow(spectral_norm(m), 2);
  for (const Matrix& m : dE) acc += std::pow(spectral_norm(m), 2);
  return std::sqrt(acc);
}

Matrix PerturbationTuple::eval(const Rmp& g, Complex z, double pole_tol) const {
  Matrix acc = Matrix::Zero(dA.front().rows(), dA.front().cols());
  Complex zp = 1.0;
  for (const Matrix& m : dA) {
    acc += zp * m;
    zp *= z;
  }
  for (std::size_t j = 0; j < dE.size(); ++j)
    acc += g.term(static_cast<int>(j)).w.eval(z, pole_tol) * dE[j];
  return acc;
}

PerturbationTuple PerturbationTuple::scaled(double s) const {
  PerturbationTuple out = *this;
  for (Matrix& m : out.dA) m *= s;
  for (Matrix& m : out.dE) m *= s;
  out.tuple_norm = std::abs(s) * tuple_norm;
  return out;
}

namespace {

enum class BlockKind { General, Symmetric, SkewSymmetric, Hermitian, SkewHermitian };

Matrix project_block(const Matrix& m, BlockKind kind, double& shift) {
  Matrix proj;
  switch (kind) {
    case BlockKind::General: return m;
    case BlockKind::Symmetric: proj = 0.5 * (m + m.transpose()); break;
    case BlockKind::SkewSymmetric: proj = 0.5 * (m - m.transpose()); break;
    case BlockKind::Hermitian: proj = 0.5 * (m + m.adjoint()); break;
    case BlockKind::SkewHermitian: proj = 0.5 * (m - m.adjoint()); break;
  }
  const double scale = std::max(m.norm(), 1e-300);
  shift = std::max(shift, (m - proj).norm() / scale);
  return proj;
}

Matrix map_for_kind(BlockKind kind, const Vector& x, const Vector& y, double tol) {
  switch (kind) {
    case BlockKind::General: return Matrix(y * x.adjoint() / x.squaredNorm());
    case BlockKind::Symmetric: return map_symmetric(x, y).delta;
    case BlockKind::SkewSymmetric: return map_skew_symmetric(x, y, tol).delta;
    case BlockKind::Hermitian: return map_hermitian(x, y, tol).delta;
    case BlockKind::SkewHermitian: {
      // i * Hermitian mapping of (x, -i y): delta x = y and delta^* = -delta.
      Matrix h = map_hermitian(x, Vector(-kImag * y), tol).delta;
      return Matrix(kImag * h);
    }
  }
  return Matrix();
}

struct CanonicalHermitian {
  Rmp rmp;
  std::vector<Complex> weight_factor;  // 1 for real-type terms, i for anti-real ones
};

CanonicalHermitian canonicalize(const Rmp& g, double tol) {
  CanonicalHermitian out{g, {}};
  std::vector<RmpTerm> terms;
  terms.reserve(g.terms().size());
  for (const RmpTerm& t : g.terms()) {
    if (t.w.is_real_type(tol)) {
      terms.push_back(t);
      out.weight_factor.push_back(Complex(1.0));
    } else if (t.w.is_anti_real_type(tol)) {
      terms.push_back({t.w.scaled(kImag), Matrix(-kImag * t.E)});
      out.weight_factor.push_back(kImag);
    } else {
      throw StructureMismatch("term weight is neither real-type nor anti-real-type");
    }
  }
  out.rmp = Rmp(g.coefficients(), std::move(terms));
  return out;
}

// One feasibility-projection sweep for all constrained blocks of the tag;
// returns the largest violation before correction, relative to the anchor.
double project_blocks_once(const Rmp& g, StructureTag tag, const Vector& x,
                           std::vector<Vector>& vb) {
  const int d = g.degree();
  const int k = g.num_terms();
  const double nx2 = x.squaredNorm();
  double worst = 0.0;

  auto scale_of = [&](const Vector& y) { return x.norm() * std::max(1.0, y.norm()); };
  auto fix_skew = [&](Vector& y) {
    const Complex c = x.transpose() * y;
    worst = std::max(worst, std::abs(c) / scale_of(y));
    y -= (c / nx2) * x.conjugate();
  };
  auto fix_herm = [&](Vector& y) {
    const Complex c = x.adjoint() * y;
    worst = std::max(worst, std::abs(std::imag(c)) / scale_of(y));
    y -= (kImag * std::imag(c) / nx2) * x;
  };
  auto fix_pair = [&](Vector& y1, Vector& y2, bool star) {
    if (star) {
      const Complex delta = Complex(x.adjoint() * y2) - std::conj(Complex(x.adjoint() * y1));
      worst = std::max(worst, std::abs(delta) / scale_of(y1));
      y2 -= (0.5 * delta / nx2) * x;
      y1 += (0.5 * std::conj(delta) / nx2) * x;
    } else {
      const Complex delta = Complex(x.transpose() * y2) - Complex(x.transpose() * y1);
      worst = std::max(worst, std::abs(delta) / scale_of(y1));
      y2 -= (0.5 * delta / nx2) * x.conjugate();
      y1 += (0.5 * delta / nx2) * x.conjugate();
    }
  };

  ParityPartition part;
  if (tag == StructureTag::t_even || tag == StructureTag::t_odd) part = parity_partition(g);
  auto in_odd = [&](int j) {
    return std::find(part.odd.begin(), part.odd.end(), j) != part.odd.end();
  };

  switch (tag) {
    case StructureTag::skew_symmetric:
      for (Vector& y : vb) fix_skew(y);
      break;
    case StructureTag::hermitian:
      for (Vector& y : vb) fix_herm(y);
      break;
    case StructureTag::t_even:
    case StructureTag::t_odd: {
      const bool even_tag = tag == StructureTag::t_even;
      for (int p = 0; p <= d; ++p)
        if (even_tag ? (p % 2 == 1) : (p % 2 == 0)) fix_skew(vb[static_cast<std::size_t>(p)]);
      for (int j = 0; j < k; ++j)
        if (even_tag ? in_odd(j) : !in_odd(j)) fix_skew(vb[static_cast<std::size_t>(d + 1 + j)]);
      break;
    }
    case StructureTag::star_palindromic:
    case StructureTag::t_palindromic: {
      const bool star = tag == StructureTag::star_palindromic;
      const int m = d >= 1 ? (d - 1) / 2 : -1;
      for (int p = 0; p <= m; ++p)
        fix_pair(vb[static_cast<std::size_t>(p)], vb[static_cast<std::size_t>(d - p)], star);
      if (star) {
        if (d % 2 == 0) fix_herm(vb[static_cast<std::size_t>(d / 2)]);
        for (int j = 0; j < k; ++j) fix_herm(vb[static_cast<std::size_t>(d + 1 + j)]);
      }
      break;
    }
    default:
      break;  // symmetric / none: unconstrained
  }
  return worst;
}

void project_feasibility(const Rmp& g, StructureTag tag, const RowVector& lam, const Matrix& M,
                         std::vector<Vector>& vb, Vector& v_lambda) {
  for (int sweep = 0; sweep < 40; ++sweep) {
    const Vector x = M * v_lambda;
    const double worst = project_blocks_once(g, tag, x, vb);
    v_lambda.setZero();
    for (std::size_t b = 0; b < vb.size(); ++b)
      v_lambda += lam(static_cast<Eigen::Index>(b)) * vb[b];
    if (worst <= 1e-14) break;
  }
}

ReconstructOutcome reconstruct_direct(const Rmp& g, Complex lambda, StructureTag tag,
                                      const Vector& certificate,
                                      const std::optional<RealVector>& gamma,
                                      const Tolerances& tol) {
  const int n = g.n();
  const int d = g.degree();
  const int k = g.num_terms();
  const int blocks = d + k + 1;
  if (certificate.size() != static_cast<Eigen::Index>(n) * blocks)
    throw Error("certificate has the wrong dimension");

  Vector v = certificate;
  if (gamma) {
    if (gamma->size() != v.size()) throw Error("gamma has the wrong dimension");
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) /= (*gamma)(i);
  } else if (tag == StructureTag::star_palindromic || tag == StructureTag::t_palindromic) {
    const RealVector gm = palindromic_gamma(n, d, k, lambda);
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) /= gm(i);
  }

  std::vector<Vector> vb(static_cast<std::size_t>(blocks));
  for (int b = 0; b < blocks; ++b) vb[static_cast<std::size_t>(b)] = v.segment(b * n, n);

  const RowVector lam = lambda_row(g, lambda, tol.pole_tol);
  Vector v_lambda = Vector::Zero(n);
  for (int b = 0; b < blocks; ++b) v_lambda += lam(b) * vb[static_cast<std::size_t>(b)];
  if (v_lambda.norm() <= 1e-12 * v.norm())
    throw ZeroCertificate("certificate has vanishing v_lambda");

  const Matrix M = g.eval(lambda, tol.pole_tol).partialPivLu().inverse();

  // Certificates satisfy the mapping feasibility conditions only to the
  // optimizer's residual. Project the blocks onto the feasible manifold,
  // iterating because the anchor x = M v_lambda moves with the blocks;
  // afterwards the mapped tuple makes G - DeltaG singular to rounding.
  project_feasibility(g, tag, lam, M, vb, v_lambda);
  const Vector x = M * v_lambda;

  PerturbationTuple out = PerturbationTuple::zero(n, d, k);
  double shift = 0.0;
  const double map_tol = 1e-8;

  auto block_kind_a = [&](int p) -> BlockKind {
    switch (tag) {
      case StructureTag::symmetric: return BlockKind::Symmetric;
      case StructureTag::skew_symmetric: return BlockKind::SkewSymmetric;
      case StructureTag::hermitian: return BlockKind::Hermitian;
      case StructureTag::t_even: return p % 2 == 0 ? BlockKind::Symmetric : BlockKind::SkewSymmetric;
      case StructureTag::t_odd: return p % 2 == 0 ? BlockKind::SkewSymmetric : BlockKind::Symmetric;
      default: return BlockKind::General;
    }
  };

  switch (tag) {
    case StructureTag::none:
    case StructureTag::symmetric:
    case StructureTag::skew_symmetric:
    case StructureTag::hermitian:
    case StructureTag::t_even:
    case StructureTag::t_odd: {
      ParityPartition part;
      if (tag == StructureTag::t_even || tag == StructureTag::t_odd)
        part = parity_partition(g, tol.structure_tol);
      auto in_odd = [&](int j) {
        return std::find(part.odd.begin(), part.odd.end(), j) != part.odd.end();
      };
      for (int p = 0; p <= d; ++p) {
        const BlockKind kind = tag == StructureTag::none ? BlockKind::General : block_kind_a(p);
        out.dA[static_cast<std::size_t>(p)] = project_block(
            map_for_kind(kind, x, vb[static_cast<std::size_t>(p)], map_tol), kind, shift);
      }
      for (int j = 0; j < k; ++j) {
        BlockKind kind = BlockKind::General;
        if (tag == StructureTag::symmetric) kind = BlockKind::Symmetric;
        if (tag == StructureTag::skew_symmetric) kind = BlockKind::SkewSymmetric;
        if (tag == StructureTag::hermitian) kind = BlockKind::Hermitian;
        if (tag == StructureTag::t_even)
          kind = in_odd(j) ? BlockKind::SkewSymmetric : BlockKind::Symmetric;
        if (tag == StructureTag::t_odd)
          kind = in_odd(j) ? BlockKind::Symmetric : BlockKind::SkewSymmetric;
        out.dE[static_cast<std::size_t>(j)] = project_block(
            map_for_kind(kind, x, vb[static_cast<std::size_t>(d + 1 + j)], map_tol), kind, shift);
      }
      break;
    }

    case StructureTag::star_palindromic:
    case StructureTag::t_palindromic: {
      const bool star = tag == StructureTag::star_palindromic;
      const int m = d >= 1 ? (d - 1) / 2 : -1;
      for (int p = 0; p <= m; ++p) {
        const auto pair =
            map_two_sided(x, vb[static_cast<std::size_t>(p)], vb[static_cast<std::size_t>(d - p)],
                          star ? TwoSidedFlavor::Star : TwoSidedFlavor::Transpose, map_tol);
        out.dA[static_cast<std::size_t>(p)] = pair.delta;
        out.dA[static_cast<std::size_t>(d - p)] =
            star ? Matrix(pair.delta.adjoint()) : Matrix(pair.delta.transpose());
      }
      if (d % 2 == 0) {
        const BlockKind kind = star ? BlockKind::Hermitian : BlockKind::Symmetric;
        out.dA[static_cast<std::size_t>(d / 2)] = project_block(
            map_for_kind(kind, x, vb[static_cast<std::size_t>(d / 2)], map_tol), kind, shift);
      }
      for (int j = 0; j < k; ++j) {
        const BlockKind kind = star ? BlockKind::Hermitian : BlockKind::Symmetric;
        out.dE[static_cast<std::size_t>(j)] = project_block(
            map_for_kind(kind, x, vb[static_cast<std::size_t>(d + 1 + j)], map_tol), kind, shift);
      }
      break;
    }

    default:
      throw Error("reconstruct_direct does not handle reduced structures");
  }

  out.tuple_norm = out.recompute_norm();
  return {std::move(out), shift};
}

}  // namespace

ReconstructOutcome reconstruct_perturbation(const Rmp& g, Complex lambda, StructureTag tag,
                                            const Vector& certificate,
                                            const std::optional<RealVector>& gamma,
                                            const Tolerances& tol) {
  switch (tag) {
    case StructureTag::skew_hermitian: {
      const CanonicalHermitian canon =
          canonicalize(transform(g, TransformKind::times_i), tol.structure_tol);
      ReconstructOutcome inner = reconstruct_perturbation(canon.rmp, lambda,
                                                          StructureTag::hermitian, certificate,
                                                          std::nullopt, tol);
      for (Matrix& m : inner.tuple.dA) m = -kImag * m;
      for (std::size_t j = 0; j < inner.tuple.dE.size(); ++j)
        inner.tuple.dE[j] = -kImag * canon.weight_factor[j] * inner.tuple.dE[j];
      inner.tuple.tuple_norm = inner.tuple.recompute_norm();
      return inner;
    }
    case StructureTag::star_even:
    case StructureTag::star_odd: {
      const bool odd = tag == StructureTag::star_odd;
      const CanonicalHermitian canon = canonicalize(
          transform(g, odd ? TransformKind::i_compose_iz : TransformKind::compose_iz),
          tol.structure_tol);
      const Complex lambda_inner = lambda / kImag;
      ReconstructOutcome inner = reconstruct_perturbation(
          canon.rmp, lambda_inner, StructureTag::hermitian, certificate, std::nullopt, tol);
      Complex ip = odd ? -kImag : Complex(1.0);  // (-i)^(p [+1])
      for (Matrix& m : inner.tuple.dA) {
        m = ip * m;
        ip *= -kImag;
      }
      const Complex escale = odd ? -kImag : Complex(1.0);
      for (std::size_t j = 0; j < inner.tuple.dE.size(); ++j)
        inner.tuple.dE[j] = escale * canon.weight_factor[j] * inner.tuple.dE[j];
      inner.tuple.tuple_norm = inner.tuple.recompute_norm();
      return inner;
    }
    default:
      return reconstruct_direct(g, lambda, tag, certificate, gamma, tol);
  }
}

namespace {

double block_error(const Matrix& x, const Matrix& target) {
  const double scale = std::max(x.norm(), target.norm());
  if (scale == 0.0) return 0.0;
  return (x - target).norm() / scale;
}

}  // namespace

VerificationReport verify_perturbation(const Rmp& g, Complex lambda, StructureTag tag,
                                       const PerturbationTuple& delta, const Tolerances& tol) {
  VerificationReport rep;
  const Matrix gl = g.eval(lambda, tol.pole_tol);
  const Matrix residual = gl - delta.eval(g, lambda, tol.pole_tol);
  Eigen::JacobiSVD<Matrix> svd_res(residual);
  Eigen::JacobiSVD<Matrix> svd_g(gl);
  const double gnorm = svd_g.singularValues()(0);
  rep.singularity_residual =
      svd_res.singularValues()(residual.rows() - 1) / std::max(gnorm, 1e-300);

  const int d = g.degree();
  const int k = g.num_terms();
  auto record = [&](const std::string& label, double err) {
    rep.structure_violations.push_back({label, err});
    rep.max_structure_violation = std::max(rep.max_structure_violation, err);
  };
  auto a_lbl = [](int p) { return "dA" + std::to_string(p); };
  auto e_lbl = [](int j) { return "dE" + std::to_string(j + 1); };

  auto self_error = [&](const Matrix& m, BlockKind kind) {
    switch (kind) {
      case BlockKind::General: return 0.0;
      case BlockKind::Symmetric: return block_error(m.transpose(), m);
      case BlockKind::SkewSymmetric: return block_error(m.transpose(), Matrix(-m));
      case BlockKind::Hermitian: return block_error(m.adjoint(), m);
      case BlockKind::SkewHermitian: return block_error(m.adjoint(), Matrix(-m));
    }
    return 0.0;
  };

  switch (tag) {
    case StructureTag::none:
      break;
    case StructureTag::symmetric:
    case StructureTag::skew_symmetric:
    case StructureTag::hermitian:
    case StructureTag::skew_hermitian: {
      BlockKind kind = BlockKind::Symmetric;
      if (tag == StructureTag::skew_symmetric) kind = BlockKind::SkewSymmetric;
      if (tag == StructureTag::hermitian) kind = BlockKind::Hermitian;
      if (tag == StructureTag::skew_hermitian) kind = BlockKind::SkewHermitian;
      for (int p = 0; p <= d; ++p)
        record(a_lbl(p), self_error(delta.dA[static_cast<std::size_t>(p)], kind));
      for (int j = 0; j < k; ++j)
        record(e_lbl(j), self_error(delta.dE[static_cast<std::size_t>(j)], kind));
      break;
    }
    case StructureTag::t_even:
    case StructureTag::t_odd: {
      const ParityPartition part = parity_partition(g, tol.structure_tol);
      auto in_odd = [&](int j) {
        return std::find(part.odd.begin(), part.odd.end(), j) != part.odd.end();
      };
      const bool even_tag = tag == StructureTag::t_even;
      for (int p = 0; p <= d; ++p) {
        const bool skew = even_tag ? (p % 2 == 1) : (p % 2 == 0);
        record(a_lbl(p), self_error(delta.dA[static_cast<std::size_t>(p)],
                                    skew ? BlockKind::SkewSymmetric : BlockKind::Symmetric));
      }
      for (int j = 0; j < k; ++j) {
        const bool skew = even_tag ? in_odd(j) : !in_odd(j);
        record(e_lbl(j), self_error(delta.dE[static_cast<std::size_t>(j)],
                                    skew ? BlockKind::SkewSymmetric : BlockKind::Symmetric));
      }
      break;
    }
    case StructureTag::star_even:
    case StructureTag::star_odd: {
      const bool even_tag = tag == StructureTag::star_even;
      for (int p = 0; p <= d; ++p) {
        const bool herm = even_tag ? (p % 2 == 0) : (p % 2 == 1);
        record(a_lbl(p), self_error(delta.dA[static_cast<std::size_t>(p)],
                                    herm ? BlockKind::Hermitian : BlockKind::SkewHermitian));
      }
      for (int j = 0; j < k; ++j) {
        const bool plus = g.term(j).w.is_conj_even_type(tol.structure_tol);
        const bool herm = even_tag ? plus : !plus;
        record(e_lbl(j), self_error(delta.dE[static_cast<std::size_t>(j)],
                                    herm ? BlockKind::Hermitian : BlockKind::SkewHermitian));
      }
      break;
    }
    case StructureTag::star_palindromic:
    case StructureTag::t_palindromic: {
      const bool star = tag == StructureTag::star_palindromic;
      for (int p = 0; p <= d; ++p) {
        const Matrix& ap = delta.dA[static_cast<std::size_t>(p)];
        const Matrix& ad = delta.dA[static_cast<std::size_t>(d - p)];
        record(a_lbl(p), block_error(star ? Matrix(ap.adjoint()) : Matrix(ap.transpose()), ad));
      }
      for (int j = 0; j < k; ++j)
        record(e_lbl(j), self_error(delta.dE[static_cast<std::size_t>(j)],
                                    star ? BlockKind::Hermitian : BlockKind::Symmetric));
      break;
    }
  }

  rep.tuple_norm = delta.recompute_norm();
  return rep;
}

}  // namespace rmpbe
