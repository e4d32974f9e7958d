#include "rmpbe/rmp.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <unordered_map>

namespace rmpbe {

std::string to_string(StructureTag tag) {
  switch (tag) {
    case StructureTag::symmetric: return "symmetric";
    case StructureTag::skew_symmetric: return "skew_symmetric";
    case StructureTag::t_even: return "t_even";
    case StructureTag::t_odd: return "t_odd";
    case StructureTag::hermitian: return "hermitian";
    case StructureTag::skew_hermitian: return "skew_hermitian";
    case StructureTag::star_even: return "star_even";
    case StructureTag::star_odd: return "star_odd";
    case StructureTag::star_palindromic: return "star_palindromic";
    case StructureTag::t_palindromic: return "t_palindromic";
    case StructureTag::none: return "none";
  }
  return "none";
}

std::optional<StructureTag> structure_from_string(const std::string& name) {
  static const std::unordered_map<std::string, StructureTag> table = {
      {"symmetric", StructureTag::symmetric},
      {"skew_symmetric", StructureTag::skew_symmetric},
      {"t_even", StructureTag::t_even},
      {"t_odd", StructureTag::t_odd},
      {"hermitian", StructureTag::hermitian},
      {"skew_hermitian", StructureTag::skew_hermitian},
      {"star_even", StructureTag::star_even},
      {"star_odd", StructureTag::star_odd},
      {"star_palindromic", StructureTag::star_palindromic},
      {"t_palindromic", StructureTag::t_palindromic},
      {"none", StructureTag::none},
  };
  auto it = table.find(name);
  if (it == table.end()) return std::nullopt;
  return it->second;
}

Rmp::Rmp(std::vector<Matrix> A, std::vector<RmpTerm> terms)
    : A_(std::move(A)), terms_(std::move(terms)) {
  if (A_.empty()) throw Error("RMP needs at least the constant coefficient A_0");
  n_ = static_cast<int>(A_.front().rows());
  auto check = [this](const Matrix& m, const char* what) {
    if (m.rows() != n_ || m.cols() != n_) throw Error(std::string(what) + ": wrong dimensions");
    if (!m.allFinite()) throw Error(std::string(what) + ": non-finite entries");
  };
  for (const Matrix& a : A_) check(a, "polynomial coefficient");
  for (const RmpTerm& t : terms_) check(t.E, "rational term coefficient");
}

Matrix Rmp::eval(Complex z, double pole_tol) const {
  Matrix acc = Matrix::Zero(n_, n_);
  Complex zp = 1.0;
  for (const Matrix& a : A_) {
    acc += zp * a;
    zp *= z;
  }
  for (const RmpTerm& t : terms_) acc += t.w.eval(z, pole_tol) * t.E;
  return acc;
}

bool Rmp::is_pole(Complex z, double pole_tol) const {
  for (const RmpTerm& t : terms_)
    if (t.w.is_pole(z, pole_tol)) return true;
  return false;
}

AdmissibilityReport check_admissible(const Rmp& g, Complex lambda, const Tolerances& tol) {
  AdmissibilityReport rep;
  rep.pole_free = !g.is_pole(lambda, tol.pole_tol);
  if (!rep.pole_free) return rep;

  rep.weights_nonzero = true;
  for (int j = 0; j < g.num_terms(); ++j) {
    if (std::abs(g.term(j).w.eval(lambda, tol.pole_tol)) <= tol.zero_tol) {
      rep.weights_nonzero = false;
      break;
    }
  }

  const Matrix gl = g.eval(lambda, tol.pole_tol);
  Eigen::JacobiSVD<Matrix> svd(gl);
  rep.sigma_min = svd.singularValues()(g.n() - 1);
  rep.norm = svd.singularValues()(0);
  rep.invertible = rep.sigma_min > tol.inv_tol * rep.norm;
  return rep;
}

namespace {

double rel_mismatch(const Matrix& x, const Matrix& target) {
  const double scale = std::max(x.norm(), target.norm());
  if (scale == 0.0) return 0.0;
  return (x - target).norm() / scale;
}

void check_block(StructureReport& rep, const std::string& label, const Matrix& x,
                 const Matrix& target, double tol) {
  const double err = rel_mismatch(x, target);
  if (err > tol) {
    rep.valid = false;
    rep.violations.push_back({label, err});
  }
}

void flag(StructureReport& rep, const std::string& label) {
  rep.valid = false;
  rep.violations.push_back({label, 1.0});
}

std::string a_label(int p) { return "A" + std::to_string(p); }
std::string e_label(int j) { return "E" + std::to_string(j + 1); }
std::string w_label(int j) { return "w" + std::to_string(j + 1); }

}  // namespace

StructureReport validate_structure(const Rmp& g, StructureTag tag, double tol) {
  StructureReport rep;
  const int d = g.degree();
  const int k = g.num_terms();

  auto sign = [](int s) { return s % 2 == 0 ? 1.0 : -1.0; };

  switch (tag) {
    case StructureTag::none:
      break;

    case StructureTag::symmetric:
      for (int p = 0; p <= d; ++p)
        check_block(rep, a_label(p), g.A(p).transpose(), g.A(p), tol);
      for (int j = 0; j < k; ++j)
        check_block(rep, e_label(j), g.term(j).E.transpose(), g.term(j).E, tol);
      break;

    case StructureTag::skew_symmetric:
      for (int p = 0; p <= d; ++p)
        check_block(rep, a_label(p), g.A(p).transpose(), Matrix(-g.A(p)), tol);
      for (int j = 0; j < k; ++j)
        check_block(rep, e_label(j), g.term(j).E.transpose(), Matrix(-g.term(j).E), tol);
      break;

    case StructureTag::t_even:
    case StructureTag::t_odd: {
      const int off = (tag == StructureTag::t_odd) ? 1 : 0;
      for (int p = 0; p <= d; ++p)
        check_block(rep, a_label(p), g.A(p).transpose(), Matrix(sign(p + off) * g.A(p)), tol);
      for (int j = 0; j < k; ++j) {
        const auto parity = g.term(j).w.parity(tol);
        if (parity == RationalScalarFn::Parity::None) {
          flag(rep, w_label(j));
          continue;
        }
        const bool odd_weight = parity == RationalScalarFn::Parity::Odd;
        // T-even: skew E for odd weights; T-odd: skew E for even weights.
        const bool skew = (tag == StructureTag::t_even) ? odd_weight : !odd_weight;
        check_block(rep, e_label(j), g.term(j).E.transpose(),
                    Matrix((skew ? -1.0 : 1.0) * g.term(j).E), tol);
      }
      break;
    }

    case StructureTag::hermitian:
    case StructureTag::skew_hermitian: {
      const double s = (tag == StructureTag::hermitian) ? 1.0 : -1.0;
      for (int p = 0; p <= d; ++p)
        check_block(rep, a_label(p), g.A(p).adjoint(), Matrix(s * g.A(p)), tol);
      for (int j = 0; j < k; ++j) {
        if (!g.term(j).w.is_real_type(tol)) flag(rep, w_label(j));
        check_block(rep, e_label(j), g.term(j).E.adjoint(), Matrix(s * g.term(j).E), tol);
      }
      break;
    }

    case StructureTag::star_even:
    case StructureTag::star_odd: {
      const bool even = tag == StructureTag::star_even;
      const int off = even ? 0 : 1;
      for (int p = 0; p <= d; ++p)
        check_block(rep, a_label(p), g.A(p).adjoint(), Matrix(sign(p + off) * g.A(p)), tol);
      for (int j = 0; j < k; ++j) {
        const bool plus = g.term(j).w.is_conj_even_type(tol);
        const bool minus = g.term(j).w.is_conj_odd_type(tol);
        if (!plus && !minus) {
          flag(rep, w_label(j));
          continue;
        }
        // *-even pairs Hermitian E with plus-type weights; *-odd swaps.
        const bool hermitian_block = even ? plus : minus;
        check_block(rep, e_label(j), g.term(j).E.adjoint(),
                    Matrix((hermitian_block ? 1.0 : -1.0) * g.term(j).E), tol);
      }
      break;
    }

    case StructureTag::star_palindromic:
      for (int p = 0; p <= d; ++p)
        check_block(rep, a_label(p), g.A(p).adjoint(), g.A(d - p), tol);
      for (int j = 0; j < k; ++j) {
        check_block(rep, e_label(j), g.term(j).E.adjoint(), g.term(j).E, tol);
        if (!g.term(j).w.satisfies_star_palindromic(d, std::max(tol, 1e-8))) flag(rep, w_label(j));
      }
      break;

    case StructureTag::t_palindromic:
      for (int p = 0; p <= d; ++p)
        check_block(rep, a_label(p), g.A(p).transpose(), g.A(d - p), tol);
      for (int j = 0; j < k; ++j) {
        check_block(rep, e_label(j), g.term(j).E.transpose(), g.term(j).E, tol);
        if (!g.term(j).w.satisfies_t_palindromic(d, std::max(tol, 1e-8))) flag(rep, w_label(j));
      }
      break;
  }
  return rep;
}

ParityPartition parity_partition(const Rmp& g, double tol) {
  ParityPartition part;
  for (int j = 0; j < g.num_terms(); ++j) {
    switch (g.term(j).w.parity(tol)) {
      case RationalScalarFn::Parity::Odd: part.odd.push_back(j); break;
      case RationalScalarFn::Parity::Even: part.even.push_back(j); break;
      case RationalScalarFn::Parity::None: throw NoDefiniteParity(j + 1);
    }
  }
  return part;
}

Rmp transform(const Rmp& g, TransformKind kind) {
  std::vector<Matrix> A;
  std::vector<RmpTerm> terms;
  A.reserve(g.coefficients().size());
  terms.reserve(g.terms().size());

  const bool compose = kind != TransformKind::times_i;
  const bool scale = kind != TransformKind::compose_iz;

  Complex ip = 1.0;
  for (const Matrix& a : g.coefficients()) {
    Complex factor = compose ? ip : Complex(1.0);
    if (scale) factor *= kImag;
    A.push_back(factor * a);
    ip *= kImag;
  }
  for (const RmpTerm& t : g.terms()) {
    RationalScalarFn w = compose ? t.w.compose_iz() : t.w;
    terms.push_back({std::move(w), scale ? Matrix(kImag * t.E) : t.E});
  }
  return Rmp(std::move(A), std::move(terms));
}

Rmp hermitian_canonical_terms(const Rmp& g, double tol) {
  std::vector<RmpTerm> terms;
  terms.reserve(g.terms().size());
  for (const RmpTerm& t : g.terms()) {
    if (t.w.is_real_type(tol)) {
      terms.push_back(t);
    } else if (t.w.is_anti_real_type(tol)) {
      terms.push_back({t.w.scaled(kImag), Matrix(-kImag * t.E)});
    } else {
      throw StructureMismatch("term weight is neither real-type nor anti-real-type");
    }
  }
  return Rmp(g.coefficients(), std::move(terms));
}

}  // namespace rmpbe
