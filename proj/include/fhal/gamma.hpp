#pragma once

// Gamma-function kernels used by the Mittag-Leffler evaluator: a Stirling
// series with Bernoulli-number corrections (A&S 6.1.40), pushed to the
// asymptotic regime by upward recurrence.  The same coefficient table
// drives a double and a double-double variant; the reciprocal handles the
// poles at nonpositive integers through the reflection formula, where it
// is exactly zero.

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>

#include "fhal/dd_real.hpp"

namespace fhal {
namespace detail {

// a_m = B_{2m} / ((2m)(2m-1)), split into hi/lo words.
inline constexpr int kStirlingTerms = 27;
inline constexpr double kStirlingHi[kStirlingTerms] = {
    0.08333333333333333,     -0.002777777777777778, 0.0007936507936507937,
    -0.0005952380952380953,  0.0008417508417508417, -0.0019175269175269176,
    0.00641025641025641,     -0.029550653594771242, 0.17964437236883057,
    -1.3924322169059011,     13.402864044168393,    -156.84828462600203,
    2193.1033333333335,      -36108.77125372499,    691472.268851313,
    -15238221.539407415,     382900751.39141417,    -10882266035.784391,
    347320283765.00226,      -12369602142269.275,   488788064793079.3,
    -2.1320333960919372e+16, 1.0217752965257001e+18, -5.35754721733002e+19,
    3.0615782637048834e+21,  -1.8999917426399204e+23, 1.2763374033828835e+25};
inline constexpr double kStirlingLo[kStirlingTerms] = {
    4.625929269271485e-18,   1.0601087908747154e-19, 6.883823317368282e-22,
    5.36938218754726e-20,    3.6870174889237694e-20, 1.0675702776872475e-19,
    2.2240044563805217e-19,  4.861760957508855e-19,  -6.401600482710946e-19,
    1.5837056989230303e-17,  -6.154114101993966e-16, 9.391823141715389e-15,
    -1.3339255626002948e-13, 5.897583353514365e-13,  2.5585296305158e-11,
    -8.76774522490625e-10,   -2.4082684757733585e-08, 3.141830930219749e-07,
    -6.048528997747748e-06,  0.0009363732896507286,  0.022575815162518022,
    -1.8969750589821368,     -18.434712371946414,    -90.8277091919692,
    -14332.848948670377,     -1259161.1429306944,    -644253432.6223022};

inline constexpr double kHalfLn2Pi = 0.9189385332046728;

// ln Gamma(x) for x >= 12 by the Stirling series.
inline double lgamma_stirling(double x) {
  double inv = 1.0 / x;
  double inv2 = inv * inv;
  double p = inv;
  double corr = 0.0;
  for (int m = 0; m < 10; ++m) {
    corr += kStirlingHi[m] * p;
    p *= inv2;
  }
  return (x - 0.5) * std::log(x) - x + kHalfLn2Pi + corr;
}

}  // namespace detail

// ln Gamma(x), x > 0.
inline double lgamma_pos(double x) {
  if (!(x > 0.0)) throw std::domain_error("lgamma_pos: argument must be positive");
  if (x >= 12.0) return detail::lgamma_stirling(x);
  // Gamma(x) = Gamma(x + n) / (x (x+1) ... (x+n-1))
  double shift = 0.0;
  double y = x;
  while (y < 12.0) {
    shift += std::log(y);
    y += 1.0;
  }
  return detail::lgamma_stirling(y) - shift;
}

// Gamma(x), x > 0.  Throws on overflow (x > ~171.62).
inline double tgamma_pos(double x) {
  if (!(x > 0.0)) throw std::domain_error("tgamma_pos: argument must be positive");
  double lg = lgamma_pos(x);
  if (lg > 709.0) throw std::overflow_error("tgamma_pos: result overflows");
  return std::exp(lg);
}

// sin(pi*x) with exact range reduction.
inline double sinpi(double x) {
  double n = std::nearbyint(x);
  double r = x - n;  // |r| <= 0.5, exact
  double s = std::sin(3.141592653589793 * r + 1.2246467991473532e-16 * r);
  return (static_cast<std::int64_t>(n) % 2 == 0) ? s : -s;
}

// 1/Gamma(x) for any real x; zero at the poles x = 0, -1, -2, ...
inline double rgamma(double x) {
  if (x > 0.0) {
    double lg = lgamma_pos(x);
    return lg > 709.0 ? std::exp(-lg) : 1.0 / std::exp(lg);
  }
  double s = sinpi(x);
  if (s == 0.0) return 0.0;
  // 1/Gamma(x) = Gamma(1-x) sin(pi x) / pi
  double lg = lgamma_pos(1.0 - x);
  double ln_abs = lg + std::log(std::fabs(s) / 3.141592653589793);
  if (ln_abs > 709.0) throw std::overflow_error("rgamma: result overflows");
  return std::copysign(std::exp(ln_abs), s);
}

// ln|1/Gamma(x)| and its sign; sign 0 marks a pole.  Lets callers assemble
// products like x^{-k}/Gamma(beta - alpha k) without overflow.
inline void rgamma_log(double x, double& ln_abs, int& sign) {
  if (x > 0.0) {
    ln_abs = -lgamma_pos(x);
    sign = 1;
    return;
  }
  double s = sinpi(x);
  if (s == 0.0) {
    ln_abs = -std::numeric_limits<double>::infinity();
    sign = 0;
    return;
  }
  ln_abs = lgamma_pos(1.0 - x) + std::log(std::fabs(s) / 3.141592653589793);
  sign = s > 0.0 ? 1 : -1;
}

// --- double-double variants (positive arguments only) --------------------

// ln Gamma(x) for x >= 26 in double-double.
inline dd_real dd_lgamma_stirling(const dd_real& x) {
  dd_real inv = 1.0 / x;
  dd_real inv2 = inv * inv;
  dd_real p = inv;
  dd_real corr(0.0);
  for (int m = 0; m < detail::kStirlingTerms; ++m) {
    dd_real term = dd_real(detail::kStirlingHi[m], detail::kStirlingLo[m]) * p;
    corr = corr + term;
    if (std::fabs(term.hi) < 1e-38 * (std::fabs(corr.hi) + 1.0)) break;
    p = p * inv2;
  }
  return (x - 0.5) * dd_log(x) - x + dd_half_ln_2pi + corr;
}

// Gamma(x) for x > 0 in double-double, via recurrence into the Stirling
// range.  Takes the argument itself in double-double: series like
// sum x^k / Gamma(a k + b) need the arguments a k + b formed exactly, or
// the per-term rounding of a*k destroys the correlation that keeps the
// alternating sum conditioned.
inline dd_real dd_gamma_pos(const dd_real& x) {
  if (!(x.hi > 0.0)) throw std::domain_error("dd_gamma_pos: argument must be positive");
  dd_real prod(1.0);
  dd_real y = x;
  while (y.hi < 26.0) {
    prod = prod * y;
    y = y + 1.0;
  }
  return dd_exp(dd_lgamma_stirling(y)) / prod;
}

inline dd_real dd_gamma_pos(double x) { return dd_gamma_pos(dd_real(x)); }

// 1/Gamma(x) for x > 0 in double-double.
inline dd_real dd_rgamma_pos(const dd_real& x) { return 1.0 / dd_gamma_pos(x); }
inline dd_real dd_rgamma_pos(double x) { return 1.0 / dd_gamma_pos(x); }

}  // namespace fhal
