#include "rmpbe/rational_fn.hpp"

#include <algorithm>
#include <cmath>

#include "rmpbe/rng.hpp"

namespace rmpbe {

namespace poly {

std::vector<Complex> trim(std::vector<Complex> c, double tol) {
  double maxc = 0.0;
  for (const Complex& v : c) maxc = std::max(maxc, std::abs(v));
  const double cut = tol * maxc;
  while (c.size() > 1 && std::abs(c.back()) <= cut) c.pop_back();
  return c;
}

Complex horner(const std::vector<Complex>& c, Complex z) {
  Complex acc = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * z + *it;
  return acc;
}

double abs_horner(const std::vector<Complex>& c, double r) {
  double acc = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * r + std::abs(*it);
  return acc;
}

std::vector<Complex> mul(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  std::vector<Complex> out(a.size() + b.size() - 1, Complex(0.0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

namespace {

double max_abs(const std::vector<Complex>& c) {
  double m = 0.0;
  for (const Complex& v : c) m = std::max(m, std::abs(v));
  return m;
}

// Coefficientwise map c_p -> (-1)^p conj(c_p), i.e. the polynomial
// z -> conj(p(-conj z)).
std::vector<Complex> conj_alternate(const std::vector<Complex>& c) {
  std::vector<Complex> out(c.size());
  for (std::size_t p = 0; p < c.size(); ++p)
    out[p] = (p % 2 == 0) ? std::conj(c[p]) : -std::conj(c[p]);
  return out;
}

bool equal_up_to(const std::vector<Complex>& a, const std::vector<Complex>& b, Complex sign,
                 double tol) {
  const std::size_t len = std::max(a.size(), b.size());
  double scale = std::max(max_abs(a), max_abs(b));
  if (scale == 0.0) return true;
  for (std::size_t i = 0; i < len; ++i) {
    Complex av = i < a.size() ? a[i] : Complex(0.0);
    Complex bv = i < b.size() ? b[i] : Complex(0.0);
    if (std::abs(av - sign * bv) > tol * scale) return false;
  }
  return true;
}

}  // namespace
}  // namespace poly

RationalScalarFn::RationalScalarFn(std::vector<Complex> s, std::vector<Complex> q)
    : s_(poly::trim(std::move(s))), q_(poly::trim(std::move(q))) {
  if (s_.empty()) s_ = {Complex(0.0)};
  if (q_.empty() || poly::max_abs(q_) == 0.0)
    throw Error("rational function with zero denominator polynomial");
}

Complex RationalScalarFn::eval(Complex z, double pole_tol) const {
  const Complex qz = poly::horner(q_, z);
  const double scale = poly::abs_horner(q_, std::abs(z));
  if (std::abs(qz) <= pole_tol * scale) throw PoleAtPoint("evaluation at a pole of the weight");
  return poly::horner(s_, z) / qz;
}

bool RationalScalarFn::is_pole(Complex z, double pole_tol) const {
  const Complex qz = poly::horner(q_, z);
  return std::abs(qz) <= pole_tol * poly::abs_horner(q_, std::abs(z));
}

namespace {

RationalScalarFn::Parity poly_parity(const std::vector<Complex>& c, double tol) {
  const double cut = tol * poly::max_abs(c);
  bool even = false, odd = false;
  for (std::size_t p = 0; p < c.size(); ++p) {
    if (std::abs(c[p]) <= cut) continue;
    (p % 2 == 0 ? even : odd) = true;
  }
  if (even && !odd) return RationalScalarFn::Parity::Even;
  if (odd && !even) return RationalScalarFn::Parity::Odd;
  return RationalScalarFn::Parity::None;
}

// Phase of the largest-modulus coefficient.
Complex lead_phase(const std::vector<Complex>& c) {
  std::size_t arg = 0;
  double best = -1.0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (std::abs(c[i]) > best) {
      best = std::abs(c[i]);
      arg = i;
    }
  }
  if (best <= 0.0) return Complex(1.0);
  return c[arg] / best;
}

bool real_after_phase(const std::vector<Complex>& c, Complex phase, double tol) {
  const double scale = poly::max_abs(c);
  for (const Complex& v : c)
    if (std::abs(std::imag(v / phase)) > tol * scale) return false;
  return true;
}

}  // namespace

RationalScalarFn::Parity RationalScalarFn::parity(double tol) const {
  const Parity ps = poly_parity(s_, tol);
  const Parity pq = poly_parity(q_, tol);
  if (ps == Parity::None || pq == Parity::None) return Parity::None;
  return ps == pq ? Parity::Even : Parity::Odd;
}

bool RationalScalarFn::is_real_type(double tol) const {
  const Complex phs = lead_phase(s_);
  const Complex phq = lead_phase(q_);
  if (!real_after_phase(s_, phs, tol) || !real_after_phase(q_, phq, tol)) return false;
  // The residual phase of s/q must be real (0 or pi).
  return std::abs(std::imag(phs / phq)) <= tol;
}

bool RationalScalarFn::is_anti_real_type(double tol) const {
  const Complex phs = lead_phase(s_);
  const Complex phq = lead_phase(q_);
  if (!real_after_phase(s_, phs, tol) || !real_after_phase(q_, phq, tol)) return false;
  return std::abs(std::real(phs / phq)) <= tol;
}

bool RationalScalarFn::is_conj_even_type(double tol) const {
  // (w(-z))^* = w(conj z)  <=>  s~(z) q(z) = s(z) q~(z) with p~ = conj_alternate(p).
  return poly::equal_up_to(poly::mul(poly::conj_alternate(s_), q_),
                           poly::mul(s_, poly::conj_alternate(q_)), Complex(1.0), tol);
}

bool RationalScalarFn::is_conj_odd_type(double tol) const {
  return poly::equal_up_to(poly::mul(poly::conj_alternate(s_), q_),
                           poly::mul(s_, poly::conj_alternate(q_)), Complex(-1.0), tol);
}

namespace {

// Fixed sample points for the palindromic weight identities: moduli split
// away from the unit circle, deterministic across runs.
std::vector<Complex> palindromic_samples() {
  Rng rng(0x5eedULL);
  std::vector<Complex> pts;
  pts.reserve(16);
  for (int i = 0; i < 16; ++i) {
    const double radius = (i % 2 == 0) ? rng.uniform(0.35, 0.75) : rng.uniform(1.3, 2.6);
    const double angle = rng.uniform(0.0, 2.0 * M_PI);
    pts.push_back(std::polar(radius, angle));
  }
  return pts;
}

}  // namespace

bool RationalScalarFn::satisfies_star_palindromic(int d, double tol) const {
  for (const Complex& z : palindromic_samples()) {
    Complex lhs, rhs;
    try {
      lhs = std::conj(eval(z));
      rhs = std::pow(std::conj(z), d) * eval(1.0 / std::conj(z));
    } catch (const PoleAtPoint&) {
      continue;
    }
    const double scale = std::max({std::abs(lhs), std::abs(rhs), 1e-30});
    if (std::abs(lhs - rhs) > tol * scale) return false;
  }
  return true;
}

bool RationalScalarFn::satisfies_t_palindromic(int d, double tol) const {
  for (const Complex& z : palindromic_samples()) {
    Complex lhs, rhs;
    try {
      lhs = eval(z);
      rhs = std::pow(z, d) * eval(1.0 / z);
    } catch (const PoleAtPoint&) {
      continue;
    }
    const double scale = std::max({std::abs(lhs), std::abs(rhs), 1e-30});
    if (std::abs(lhs - rhs) > tol * scale) return false;
  }
  return true;
}

RationalScalarFn RationalScalarFn::compose_iz() const {
  auto scale_by_powers = [](std::vector<Complex> c) {
    Complex ip = 1.0;
    for (std::size_t p = 0; p < c.size(); ++p) {
      c[p] *= ip;
      ip *= kImag;
    }
    return c;
  };
  return RationalScalarFn(scale_by_powers(s_), scale_by_powers(q_));
}

RationalScalarFn RationalScalarFn::scaled(Complex c) const {
  std::vector<Complex> s = s_;
  for (Complex& v : s) v *= c;
  return RationalScalarFn(std::move(s), q_);
}

Complex eval_weight(const RationalScalarFn& w, Complex z, double pole_tol) {
  return w.eval(z, pole_tol);
}

}  // namespace rmpbe
