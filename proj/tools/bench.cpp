// Compares the serial reference path against the OpenMP path for the
// data-parallel kernels: the multi-start lambda_2 solver, the brute-force
// oracle, and the homotopy spectrum grid. Results must match bitwise;
// this binary reports timings and verifies the match.

#include <chrono>
#include <cstdio>
#include <functional>

#include "rmpbe/backerr.hpp"
#include "rmpbe/oracle.hpp"
#include "rmpbe/rng.hpp"
#include "rmpbe/spectrum.hpp"

using namespace rmpbe;

namespace {

double seconds(const std::function<void()>& fn) {
  const auto start = std::chrono::steady_clock::now();
  fn();
  const auto stop = std::chrono::steady_clock::now();
  return std::chrono::duration<double>(stop - start).count();
}

Matrix hermitianize(const Matrix& m) { return 0.5 * (m + m.adjoint()); }

Rmp t_even_instance(Rng& rng, int n) {
  auto sym = [&] {
    Matrix m = rng.complex_matrix(n, n);
    return Matrix(0.5 * (m + m.transpose()));
  };
  auto skew = [&] {
    Matrix m = rng.complex_matrix(n, n);
    return Matrix(0.5 * (m - m.transpose()));
  };
  // degree 2, one odd weight z / (2 + z^2)
  RationalScalarFn w({0.0, 1.0}, {2.0, 0.0, 1.0});
  return Rmp({sym(), skew(), sym()}, {{w, skew()}});
}

Rmp hermitian_instance(Rng& rng, int n) {
  RationalScalarFn w1({1.0}, {1.0, 1.0});
  RationalScalarFn w2({1.0}, {2.0, 1.0});
  return Rmp({hermitianize(rng.complex_matrix(n, n)), hermitianize(rng.complex_matrix(n, n))},
             {{w1, hermitianize(rng.complex_matrix(n, n))},
              {w2, hermitianize(rng.complex_matrix(n, n))}});
}

void report(const char* name, double serial, double parallel, bool match) {
  std::printf("%-28s %10.3fs %10.3fs %8.2fx   %s\n", name, serial, parallel, serial / parallel,
              match ? "results match" : "MISMATCH");
}

}  // namespace

int main() {
  Rng rng(7);
  const Rmp teven = t_even_instance(rng, 3);
  const Rmp herm = hermitian_instance(rng, 3);
  const Complex lambda_t(0.9, 0.7);
  const Complex lambda_h(0.6, 0.8);

  std::printf("%-28s %11s %11s %9s\n", "kernel", "serial", "openmp", "speedup");

  {
    OptOptions serial_opts, par_opts;
    serial_opts.exec = ExecPolicy::Serial;
    par_opts.exec = ExecPolicy::Parallel;
    BackwardErrorResult rs, rp;
    const double ts = seconds([&] { rs = eta_structured(teven, lambda_t, StructureTag::t_even,
                                                        serial_opts); });
    const double tp = seconds([&] { rp = eta_structured(teven, lambda_t, StructureTag::t_even,
                                                        par_opts); });
    report("lambda2 multistart (t_even)", ts, tp,
           rs.eta == rp.eta && rs.t_hat.isApprox(rp.t_hat, 0.0));
  }

  {
    OracleOptions serial_opts, par_opts;
    serial_opts.exec = ExecPolicy::Serial;
    par_opts.exec = ExecPolicy::Parallel;
    Rng r2(11);
    const Rmp small = hermitian_instance(r2, 2);
    OracleResult os, op;
    const double ts = seconds(
        [&] { os = oracle_eta(small, lambda_h, StructureTag::hermitian, serial_opts); });
    const double tp =
        seconds([&] { op = oracle_eta(small, lambda_h, StructureTag::hermitian, par_opts); });
    report("oracle restarts (hermitian)", ts, tp, os.eta == op.eta);
  }

  {
    const PerturbationTuple zero = PerturbationTuple::zero(herm.n(), herm.degree(),
                                                           herm.num_terms());
    std::vector<HomotopyStep> ss, sp;
    const double ts = seconds([&] { ss = homotopy_curves(herm, zero, 64, ExecPolicy::Serial); });
    const double tp = seconds([&] { sp = homotopy_curves(herm, zero, 64, ExecPolicy::Parallel); });
    bool match = ss.size() == sp.size();
    for (std::size_t i = 0; match && i < ss.size(); ++i) {
      match = ss[i].spectrum.has_value() == sp[i].spectrum.has_value();
      if (match && ss[i].spectrum)
        match = ss[i].spectrum->eigenvalues == sp[i].spectrum->eigenvalues;
    }
    report("homotopy grid (64 steps)", ts, tp, match);
  }

  return 0;
}
