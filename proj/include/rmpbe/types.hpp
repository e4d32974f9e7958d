#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>

namespace rmpbe {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RowVector = Eigen::RowVectorXcd;
using RealVector = Eigen::VectorXd;

/// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct PoleAtPoint : Error {
  using Error::Error;
};
struct ZeroVector : Error {
  using Error::Error;
};
struct ConstraintViolated : Error {
  using Error::Error;
};
struct NoDefiniteParity : Error {
  int term_index;
  explicit NoDefiniteParity(int j)
      : Error("weight " + std::to_string(j) + " has no definite parity"), term_index(j) {}
};
struct RealLambdaShortcut : Error {
  using Error::Error;
};
struct UnitCircleLambda : Error {
  using Error::Error;
};
struct CriticalLambda : Error {
  using Error::Error;
};
struct RankDeficientConstraints : Error {
  using Error::Error;
};
struct SingularRmp : Error {
  using Error::Error;
};
struct ZeroCertificate : Error {
  using Error::Error;
};
struct StructureMismatch : Error {
  using Error::Error;
};
struct Unbounded : Error {
  using Error::Error;
};
struct MaxIterations : Error {
  using Error::Error;
};
struct TooLarge : Error {
  using Error::Error;
};
struct NotExact : Error {
  using Error::Error;
};

/// Numerical thresholds shared across the library. All relative unless noted.
struct Tolerances {
  double pole_tol = 1e-12;       // |q(z)| below this times coefficient scale is a pole
  double zero_tol = 1e-12;       // weight values below this (absolute) count as zero
  double inv_tol = 1e-10;        // sigma_min(G) / ||G|| below this means singular
  double structure_tol = 1e-10;  // coefficient symmetry check
  double unit_tol = 1e-8;        // exclusion zone around |lambda|=1 and lambda=+-1
};

inline constexpr Complex kImag{0.0, 1.0};

}  // namespace rmpbe
