// Regenerates the demo problem files under demo/. Deterministic.

#include <cmath>
#include <cstdio>
#include <fstream>

#include "rmpbe/json_io.hpp"
#include "rmpbe/rng.hpp"
#include "rmpbe/spectrum.hpp"

using namespace rmpbe;

namespace {

Matrix hermitianize(const Matrix& m) { return 0.5 * (m + m.adjoint()); }

void write(const std::string& path, const Json& j) {
  std::ofstream out(path);
  out << j.dump(2) << "\n";
  std::printf("wrote %s\n", path.c_str());
}

}  // namespace

int main() {
  // Symmetric pencil z I - diag(2, 3) probed at the origin.
  {
    Matrix a0 = Matrix::Zero(2, 2);
    a0(0, 0) = -2.0;
    a0(1, 1) = -3.0;
    const Rmp g({a0, Matrix(Matrix::Identity(2, 2))}, {});
    Json j;
    j["rmp"] = rmp_to_json(g, StructureTag::symmetric);
    j["lambda"] = Json::array({0.0, 0.0});
    write("demo/symmetric.json", j);
  }

  // Hermitian instance with weights 1/(z+1), 1/(z+2), probed half a unit
  // above a real eigenvalue.
  {
    Rng rng(20240523);
    RationalScalarFn w1({1.0}, {1.0, 1.0});
    RationalScalarFn w2({1.0}, {2.0, 1.0});
    const Rmp g({hermitianize(rng.complex_matrix(3, 3)), hermitianize(rng.complex_matrix(3, 3))},
                {{w1, hermitianize(rng.complex_matrix(3, 3))},
                 {w2, hermitianize(rng.complex_matrix(3, 3))}});
    const auto spec = rmp_eigenvalues(g);
    double lambda0 = 0.0;
    for (std::size_t i = 0; i < spec.eigenvalues.size(); ++i) {
      if (spec.pole_flags[i] || std::abs(std::imag(spec.eigenvalues[i])) > 1e-8) continue;
      lambda0 = std::real(spec.eigenvalues[i]);
      break;
    }
    Json j;
    j["rmp"] = rmp_to_json(g, StructureTag::hermitian);
    j["lambda"] = Json::array({lambda0, 0.5});
    j["options"]["seed"] = 0;
    write("demo/hermitian.json", j);
  }

  // *-palindromic instance A + z A^* + z^2/(z^3+1) E, probed off the unit
  // circle near an eigenvalue.
  {
    Rng rng(4242);
    const Matrix a = rng.complex_matrix(3, 3);
    const Matrix e = hermitianize(rng.complex_matrix(3, 3));
    RationalScalarFn w({0.0, 0.0, 1.0}, {1.0, 0.0, 0.0, 1.0});
    const Rmp g({a, Matrix(a.adjoint())}, {{w, e}});
    const auto spec = rmp_eigenvalues(g);
    Complex target(0.6, 0.45);
    for (std::size_t i = 0; i < spec.eigenvalues.size(); ++i) {
      const Complex z = spec.eigenvalues[i];
      if (spec.pole_flags[i]) continue;
      if (std::abs(std::abs(z) - 1.0) < 0.15 || std::abs(z) > 3.0) continue;
      target = z * 1.12 + Complex(0.02, 0.03);
      if (std::abs(std::abs(target) - 1.0) > 0.05) break;
    }
    Json j;
    j["rmp"] = rmp_to_json(g, StructureTag::star_palindromic);
    j["lambda"] = Json::array({std::real(target), std::imag(target)});
    write("demo/palindromic.json", j);
  }
  return 0;
}
