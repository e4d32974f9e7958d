#include "rmpbe/oracle.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "rmpbe/detail/nelder_mead.hpp"
#include "rmpbe/rng.hpp"

namespace rmpbe {

namespace {

enum class BlockSet { Free, Symmetric, SkewSymmetric, Hermitian, SkewHermitian };

// Real bases of the matrix sets, n x n.
std::vector<Matrix> block_basis(int n, BlockSet set) {
  std::vector<Matrix> out;
  auto unit = [&](int i, int j) {
    Matrix m = Matrix::Zero(n, n);
    m(i, j) = 1.0;
    return m;
  };
  switch (set) {
    case BlockSet::Free:
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          out.push_back(unit(i, j));
          out.push_back(Matrix(kImag * unit(i, j)));
        }
      break;
    case BlockSet::Symmetric:
      for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
          Matrix m = unit(i, j);
          if (i != j) m += unit(j, i);
          out.push_back(m);
          out.push_back(Matrix(kImag * m));
        }
      break;
    case BlockSet::SkewSymmetric:
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
          Matrix m = unit(i, j) - unit(j, i);
          out.push_back(m);
          out.push_back(Matrix(kImag * m));
        }
      break;
    case BlockSet::Hermitian:
      for (int i = 0; i < n; ++i) out.push_back(unit(i, i));
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
          out.push_back(Matrix(unit(i, j) + unit(j, i)));
          out.push_back(Matrix(kImag * (unit(i, j) - unit(j, i))));
        }
      break;
    case BlockSet::SkewHermitian: {
      for (Matrix& m : block_basis(n, BlockSet::Hermitian)) out.push_back(Matrix(kImag * m));
      break;
    }
  }
  return out;
}

void add_a_block(std::vector<PerturbationTuple>& basis, const Rmp& g, int p, BlockSet set) {
  for (const Matrix& m : block_basis(g.n(), set)) {
    PerturbationTuple t = PerturbationTuple::zero(g.n(), g.degree(), g.num_terms());
    t.dA[static_cast<std::size_t>(p)] = m;
    basis.push_back(std::move(t));
  }
}

void add_e_block(std::vector<PerturbationTuple>& basis, const Rmp& g, int j, BlockSet set) {
  for (const Matrix& m : block_basis(g.n(), set)) {
    PerturbationTuple t = PerturbationTuple::zero(g.n(), g.degree(), g.num_terms());
    t.dE[static_cast<std::size_t>(j)] = m;
    basis.push_back(std::move(t));
  }
}

// Palindromic pair: dA_p free, dA_{d-p} = dA_p^bullet.
void add_pair_block(std::vector<PerturbationTuple>& basis, const Rmp& g, int p, bool star) {
  const int d = g.degree();
  for (const Matrix& m : block_basis(g.n(), BlockSet::Free)) {
    PerturbationTuple t = PerturbationTuple::zero(g.n(), d, g.num_terms());
    t.dA[static_cast<std::size_t>(p)] = m;
    t.dA[static_cast<std::size_t>(d - p)] = star ? Matrix(m.adjoint()) : Matrix(m.transpose());
    basis.push_back(std::move(t));
  }
}

}  // namespace

std::vector<PerturbationTuple> structured_basis(const Rmp& g, StructureTag tag, double tol) {
  std::vector<PerturbationTuple> basis;
  const int d = g.degree();
  const int k = g.num_terms();

  auto parity_or_throw = [&]() { return parity_partition(g, tol); };

  switch (tag) {
    case StructureTag::none:
      for (int p = 0; p <= d; ++p) add_a_block(basis, g, p, BlockSet::Free);
      for (int j = 0; j < k; ++j) add_e_block(basis, g, j, BlockSet::Free);
      break;
    case StructureTag::symmetric:
      for (int p = 0; p <= d; ++p) add_a_block(basis, g, p, BlockSet::Symmetric);
      for (int j = 0; j < k; ++j) add_e_block(basis, g, j, BlockSet::Symmetric);
      break;
    case StructureTag::skew_symmetric:
      for (int p = 0; p <= d; ++p) add_a_block(basis, g, p, BlockSet::SkewSymmetric);
      for (int j = 0; j < k; ++j) add_e_block(basis, g, j, BlockSet::SkewSymmetric);
      break;
    case StructureTag::hermitian:
      for (int p = 0; p <= d; ++p) add_a_block(basis, g, p, BlockSet::Hermitian);
      for (int j = 0; j < k; ++j) add_e_block(basis, g, j, BlockSet::Hermitian);
      break;
    case StructureTag::skew_hermitian:
      for (int p = 0; p <= d; ++p) add_a_block(basis, g, p, BlockSet::SkewHermitian);
      for (int j = 0; j < k; ++j) add_e_block(basis, g, j, BlockSet::SkewHermitian);
      break;
    case StructureTag::t_even: {
      const ParityPartition part = parity_or_throw();
      for (int p = 0; p <= d; ++p)
        add_a_block(basis, g, p, p % 2 == 0 ? BlockSet::Symmetric : BlockSet::SkewSymmetric);
      for (int j = 0; j < k; ++j) {
        const bool odd = std::find(part.odd.begin(), part.odd.end(), j) != part.odd.end();
        add_e_block(basis, g, j, odd ? BlockSet::SkewSymmetric : BlockSet::Symmetric);
      }
      break;
    }
    case StructureTag::t_odd: {
      const ParityPartition part = parity_or_throw();
      for (int p = 0; p <= d; ++p)
        add_a_block(basis, g, p, p % 2 == 0 ? BlockSet::SkewSymmetric : BlockSet::Symmetric);
      for (int j = 0; j < k; ++j) {
        const bool odd = std::find(part.odd.begin(), part.odd.end(), j) != part.odd.end();
        add_e_block(basis, g, j, odd ? BlockSet::Symmetric : BlockSet::SkewSymmetric);
      }
      break;
    }
    case StructureTag::star_even:
    case StructureTag::star_odd: {
      const bool even = tag == StructureTag::star_even;
      for (int p = 0; p <= d; ++p) {
        const bool herm = even ? (p % 2 == 0) : (p % 2 == 1);
        add_a_block(basis, g, p, herm ? BlockSet::Hermitian : BlockSet::SkewHermitian);
      }
      for (int j = 0; j < k; ++j) {
        const bool plus = g.term(j).w.is_conj_even_type(tol);
        const bool minus = g.term(j).w.is_conj_odd_type(tol);
        if (!plus && !minus) throw StructureMismatch("weight has no conjugate parity type");
        const bool herm = even ? plus : minus;
        add_e_block(basis, g, j, herm ? BlockSet::Hermitian : BlockSet::SkewHermitian);
      }
      break;
    }
    case StructureTag::star_palindromic:
    case StructureTag::t_palindromic: {
      const bool star = tag == StructureTag::star_palindromic;
      const int m = d >= 1 ? (d - 1) / 2 : -1;
      for (int p = 0; p <= m; ++p) add_pair_block(basis, g, p, star);
      if (d % 2 == 0)
        add_a_block(basis, g, d / 2, star ? BlockSet::Hermitian : BlockSet::Symmetric);
      for (int j = 0; j < k; ++j)
        add_e_block(basis, g, j, star ? BlockSet::Hermitian : BlockSet::Symmetric);
      break;
    }
  }
  return basis;
}

namespace {

PerturbationTuple combine(const std::vector<PerturbationTuple>& basis, const RealVector& coords) {
  PerturbationTuple out = basis.front().scaled(coords(0));
  for (std::size_t b = 1; b < basis.size(); ++b) {
    const double c = coords(static_cast<Eigen::Index>(b));
    if (c == 0.0) continue;
    for (std::size_t p = 0; p < out.dA.size(); ++p) out.dA[p] += c * basis[b].dA[p];
    for (std::size_t j = 0; j < out.dE.size(); ++j) out.dE[j] += c * basis[b].dE[j];
  }
  out.tuple_norm = out.recompute_norm();
  return out;
}

double golden_min(const std::function<double(double)>& f, double lo, double hi, int iters) {
  const double inv_phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  for (int i = 0; i < iters; ++i) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return fc < fd ? c : d;
}

}  // namespace

OracleResult oracle_eta(const Rmp& g, Complex lambda, StructureTag tag,
                        const OracleOptions& opts) {
  if (g.n() * g.num_blocks() > opts.max_problem_dim)
    throw TooLarge("oracle guard: n(d+k+1) = " + std::to_string(g.n() * g.num_blocks()) +
                   " exceeds " + std::to_string(opts.max_problem_dim));

  const std::vector<PerturbationTuple> basis = structured_basis(g, tag);
  const int dim = static_cast<int>(basis.size());
  const Matrix gl = g.eval(lambda);
  const double gnorm = Eigen::JacobiSVD<Matrix>(gl).singularValues()(0);

  // Scale reference: the unstructured error, so restarts start near the
  // right magnitude.
  const double sigma_min_g = Eigen::JacobiSVD<Matrix>(gl).singularValues()(g.n() - 1);

  auto singularity = [&](const PerturbationTuple& t) {
    const Matrix res = gl - t.eval(g, lambda);
    Eigen::JacobiSVD<Matrix> svd(res);
    return svd.singularValues()(g.n() - 1) / std::max(gnorm, 1e-300);
  };

  struct Candidate {
    double eta = std::numeric_limits<double>::infinity();
    double residual = 1.0;
    RealVector coords;
    bool success = false;
  };
  std::vector<Candidate> results(static_cast<std::size_t>(opts.restarts));

  Rng seeder(opts.seed ^ 0x0c0ffee5ULL);
  std::vector<std::uint64_t> seeds(static_cast<std::size_t>(opts.restarts));
  for (auto& s : seeds) s = seeder.next_u64();

  parallel_for(static_cast<std::size_t>(opts.restarts), opts.exec, [&](std::size_t r) {
    Rng rng(seeds[r]);
    const double start_scale = sigma_min_g * rng.uniform(0.3, 2.0) /
                               std::sqrt(static_cast<double>(dim));
    RealVector coords = start_scale * rng.normal_vector(dim);

    for (double rho : {1e2, 1e3, 1e4, 1e6, 1e8}) {
      auto objective = [&](const RealVector& c) {
        const PerturbationTuple t = combine(basis, c);
        const double res = singularity(t);
        return t.tuple_norm * t.tuple_norm + rho * res * res;
      };
      const auto nm = detail::nelder_mead(objective, coords, 0.3 * start_scale + 1e-6,
                                          90 * dim + 200, 1e-14);
      coords = nm.x;
    }

    // Ray polish: scale the found direction so the perturbed matrix is
    // singular to working precision.
    Candidate cand;
    cand.coords = coords;
    auto along_ray = [&](double s) { return singularity(combine(basis, RealVector(s * coords))); };
    const double s_star = golden_min(along_ray, 0.6, 1.8, 80);
    const double res = along_ray(s_star);
    cand.residual = res;
    if (res <= 1e-8) {
      const PerturbationTuple t = combine(basis, RealVector(s_star * coords));
      cand.eta = t.tuple_norm;
      cand.success = true;
    }
    results[r] = std::move(cand);
  });

  OracleResult out;
  std::size_t best = 0;
  bool found = false;
  for (std::size_t r = 0; r < results.size(); ++r) {
    if (results[r].success) ++out.successes;
    if (results[r].eta < results[best].eta) best = r;
    found = found || results[r].success;
  }
  if (!found) throw Error("oracle failed to reach the singular set from any restart");

  const Candidate& win = results[best];
  auto along_ray = [&](double s) {
    return singularity(combine(basis, RealVector(s * win.coords)));
  };
  const double s_star = golden_min(along_ray, 0.6, 1.8, 100);
  out.tuple = combine(basis, RealVector(s_star * win.coords));
  out.eta = out.tuple.tuple_norm;
  out.best_residual = along_ray(s_star);
  return out;
}

}  // namespace rmpbe
