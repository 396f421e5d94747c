#pragma once

// Double-double arithmetic: an unevaluated sum hi + lo of two doubles giving
// roughly 32 significant decimal digits.  Error-free transforms follow
// Dekker (1971) and Knuth TAOCP vol. 2; exp/log follow the scheme of the
// QD library (Hida, Li, Bailey).  Only what the Mittag-Leffler series
// needs is implemented: +, -, *, /, exp, log, pow on positive reals.

#include <cmath>
#include <limits>

namespace fhal {

struct dd_real {
  double hi = 0.0;
  double lo = 0.0;

  constexpr dd_real() = default;
  constexpr dd_real(double h) : hi(h), lo(0.0) {}
  constexpr dd_real(double h, double l) : hi(h), lo(l) {}

  double to_double() const { return hi + lo; }
};

namespace detail {

// |a| >= |b| assumed.
inline dd_real quick_two_sum(double a, double b) {
  double s = a + b;
  return {s, b - (s - a)};
}

inline dd_real two_sum(double a, double b) {
  double s = a + b;
  double v = s - a;
  double e = (a - (s - v)) + (b - v);
  return {s, e};
}

inline dd_real two_prod(double a, double b) {
  double p = a * b;
  return {p, std::fma(a, b, -p)};
}

}  // namespace detail

inline dd_real operator+(const dd_real& a, const dd_real& b) {
  dd_real s = detail::two_sum(a.hi, b.hi);
  dd_real t = detail::two_sum(a.lo, b.lo);
  s.lo += t.hi;
  s = detail::quick_two_sum(s.hi, s.lo);
  s.lo += t.lo;
  return detail::quick_two_sum(s.hi, s.lo);
}

inline dd_real operator-(const dd_real& a) { return {-a.hi, -a.lo}; }

inline dd_real operator-(const dd_real& a, const dd_real& b) { return a + (-b); }

inline dd_real operator*(const dd_real& a, const dd_real& b) {
  dd_real p = detail::two_prod(a.hi, b.hi);
  p.lo += a.hi * b.lo + a.lo * b.hi;
  return detail::quick_two_sum(p.hi, p.lo);
}

inline dd_real operator/(const dd_real& a, const dd_real& b) {
  double q1 = a.hi / b.hi;
  dd_real r = a - dd_real(q1) * b;
  double q2 = r.hi / b.hi;
  r = r - dd_real(q2) * b;
  double q3 = r.hi / b.hi;
  dd_real q = detail::quick_two_sum(q1, q2);
  return q + dd_real(q3);
}

inline dd_real operator+(const dd_real& a, double b) { return a + dd_real(b); }
inline dd_real operator+(double a, const dd_real& b) { return dd_real(a) + b; }
inline dd_real operator-(const dd_real& a, double b) { return a - dd_real(b); }
inline dd_real operator-(double a, const dd_real& b) { return dd_real(a) - b; }
inline dd_real operator*(const dd_real& a, double b) { return a * dd_real(b); }
inline dd_real operator*(double a, const dd_real& b) { return dd_real(a) * b; }
inline dd_real operator/(const dd_real& a, double b) { return a / dd_real(b); }
inline dd_real operator/(double a, const dd_real& b) { return dd_real(a) / b; }

inline bool operator<(const dd_real& a, const dd_real& b) {
  return a.hi < b.hi || (a.hi == b.hi && a.lo < b.lo);
}
inline bool operator>(const dd_real& a, const dd_real& b) { return b < a; }

inline dd_real dd_abs(const dd_real& a) { return a.hi < 0.0 ? -a : a; }

inline dd_real dd_ldexp(const dd_real& a, int n) {
  return {std::ldexp(a.hi, n), std::ldexp(a.lo, n)};
}

inline constexpr dd_real dd_ln2{0.6931471805599453, 2.3190468138462996e-17};
inline constexpr dd_real dd_pi{3.141592653589793, 1.2246467991473532e-16};
// ln(2*pi)/2
inline constexpr dd_real dd_half_ln_2pi{0.9189385332046728, -3.8782941580672414e-17};

// exp(a) by argument reduction a = m*ln2 + r, then e^(r/512) via Taylor and
// nine squarings carried in expm1 form to preserve the low word.
inline dd_real dd_exp(const dd_real& a) {
  constexpr double exp_max = 709.0;
  if (a.hi > exp_max) return {std::numeric_limits<double>::infinity(), 0.0};
  if (a.hi < -exp_max) return {0.0, 0.0};

  double m = std::nearbyint(a.hi / dd_ln2.hi);
  dd_real r = a - dd_ln2 * m;
  r = dd_ldexp(r, -9);  // |r| <= ln2/1024

  // s = e^r - 1
  dd_real s = r;
  dd_real term = r;
  for (int k = 2; k <= 10; ++k) {
    term = term * r / static_cast<double>(k);
    s = s + term;
    if (std::fabs(term.hi) < 1e-40 * std::fabs(s.hi)) break;
  }
  // (1+s)^2 - 1 = 2s + s^2, nine times
  for (int i = 0; i < 9; ++i) s = dd_ldexp(s, 1) + s * s;
  return dd_ldexp(s + 1.0, static_cast<int>(m));
}

// log(a) for a > 0: refine the double-precision seed with one Newton step
// y <- y + a*e^(-y) - 1 evaluated as y + r - r^2/2 where r = a/e^y - 1.
inline dd_real dd_log(const dd_real& a) {
  double y0 = std::log(a.hi);
  dd_real r = a / dd_exp(dd_real(y0)) - 1.0;
  return dd_real(y0) + r - dd_ldexp(r * r, -1);
}

// a^b for a > 0.
inline dd_real dd_pow(const dd_real& a, const dd_real& b) {
  return dd_exp(b * dd_log(a));
}

}  // namespace fhal
