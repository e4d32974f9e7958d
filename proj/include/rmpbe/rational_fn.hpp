#pragma once

#include <vector>

#include "rmpbe/types.hpp"

namespace rmpbe {

/// Scalar rational function w(z) = s(z)/q(z) with complex coefficients
/// stored in ascending powers. Trailing (near-)zero coefficients are
/// trimmed on construction so degrees are well defined.
class RationalScalarFn {
 public:
  enum class Parity { Even, Odd, None };

  RationalScalarFn(std::vector<Complex> s, std::vector<Complex> q);

  const std::vector<Complex>& numerator() const { return s_; }
  const std::vector<Complex>& denominator() const { return q_; }
  int num_degree() const { return static_cast<int>(s_.size()) - 1; }
  int den_degree() const { return static_cast<int>(q_.size()) - 1; }

  /// Horner evaluation of s(z)/q(z). Throws PoleAtPoint when |q(z)| falls
  /// below pole_tol times the coefficient scale of q at |z|.
  Complex eval(Complex z, double pole_tol = 1e-12) const;

  bool is_pole(Complex z, double pole_tol = 1e-12) const;

  /// Structural parity from the even/odd index support of s and q.
  Parity parity(double tol = 1e-10) const;

  /// Whether (w(z))^* = w(conj z), i.e. w has real coefficients up to a
  /// common phase. Checked by phase-normalizing s and q separately and
  /// comparing the relative phase.
  bool is_real_type(double tol = 1e-10) const;

  /// Whether (w(z))^* = -w(conj z), i.e. i*w is real-type.
  bool is_anti_real_type(double tol = 1e-10) const;

  /// Conjugate-parity types used by the *-even / *-odd structures:
  /// plus:  (w(-z))^* =  w(conj z);  minus: (w(-z))^* = -w(conj z).
  /// Both reduce to exact polynomial identities on the coefficients.
  bool is_conj_even_type(double tol = 1e-10) const;
  bool is_conj_odd_type(double tol = 1e-10) const;

  /// Palindromic weight identities, checked by sampling at 16 points off
  /// the unit circle: star requires (w(z))^* = conj(z)^d w(1/conj(z)),
  /// transpose requires w(z) = z^d w(1/z).
  bool satisfies_star_palindromic(int d, double tol = 1e-8) const;
  bool satisfies_t_palindromic(int d, double tol = 1e-8) const;

  /// Returns w(i z): coefficient c_p is scaled by i^p in both polynomials.
  RationalScalarFn compose_iz() const;

  /// Returns c * w (scales the numerator).
  RationalScalarFn scaled(Complex c) const;

 private:
  std::vector<Complex> s_, q_;
};

/// Free-function form of RationalScalarFn::eval.
Complex eval_weight(const RationalScalarFn& w, Complex z, double pole_tol = 1e-12);

// Small polynomial helpers shared with the spectrum module.
namespace poly {
std::vector<Complex> trim(std::vector<Complex> c, double tol = 0.0);
Complex horner(const std::vector<Complex>& c, Complex z);
double abs_horner(const std::vector<Complex>& c, double r);
std::vector<Complex> mul(const std::vector<Complex>& a, const std::vector<Complex>& b);
}  // namespace poly

}  // namespace rmpbe
