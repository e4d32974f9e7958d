#pragma once

#include <cmath>
#include <cstdint>

#include "rmpbe/types.hpp"

namespace rmpbe {

// Deterministic splitmix64 generator. std::uniform_real_distribution is
// implementation-defined, which would break the byte-reproducibility
// contract, so sampling is done from raw bits here.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1).
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * uniform01(); }

  /// Standard normal via Box-Muller.
  double normal() {
    double u1 = uniform01();
    double u2 = uniform01();
    while (u1 <= 1e-300) u1 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

  Complex complex_normal() { return Complex(normal(), normal()); }

  Vector complex_normal_vector(int n) {
    Vector v(n);
    for (int i = 0; i < n; ++i) v(i) = complex_normal();
    return v;
  }

  RealVector normal_vector(int n) {
    RealVector v(n);
    for (int i = 0; i < n; ++i) v(i) = normal();
    return v;
  }

  /// Uniform direction on the real unit sphere in R^n.
  RealVector unit_sphere(int n) {
    RealVector v = normal_vector(n);
    double nrm = v.norm();
    while (nrm < 1e-12) {
      v = normal_vector(n);
      nrm = v.norm();
    }
    return v / nrm;
  }

  /// Uniform point in the real ball of given radius.
  RealVector ball(int n, double radius) {
    RealVector dir = unit_sphere(n);
    double r = radius * std::pow(uniform01(), 1.0 / static_cast<double>(n));
    return r * dir;
  }

  Matrix complex_matrix(int rows, int cols) {
    Matrix m(rows, cols);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) m(i, j) = complex_normal();
    return m;
  }

  /// Derives an independent stream, for per-task seeding in parallel loops.
  std::uint64_t fork(std::uint64_t salt) {
    std::uint64_t z = state_ ^ (salt * 0xd1342543de82ef95ULL + 0x2545f4914f6cdd1dULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

}  // namespace rmpbe
