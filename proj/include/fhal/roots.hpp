#pragma once

// Bracketing root finder for monotone scalar functions.  Bisection only:
// the characteristic functions solved here blow up near one end of the
// bracket, which rules out open-ended Newton steps.

#include <cmath>
#include <functional>
#include <string>

#include "fhal/errors.hpp"

namespace fhal {

struct BisectOptions {
  double f_tol = 1e-10;       // accept when |f| <= f_tol
  double x_rel_tol = 1e-12;   // ... and bracket width <= x_rel_tol * max(1,|x|)
  int max_iter = 400;
};

// Root of an increasing function f on [lo, hi] with f(lo) <= 0 <= f(hi).
template <typename F>
double bisect_increasing(const F& f, double lo, double hi, const BisectOptions& opt = {}) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo > 0.0 || fhi < 0.0)
    throw convergence_error("bisect: endpoints do not bracket a root");
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  double mid = lo;
  for (int it = 0; it < opt.max_iter; ++it) {
    mid = 0.5 * (lo + hi);
    double fm = f(mid);
    if (fm <= 0.0)
      lo = mid;
    else
      hi = mid;
    if (std::fabs(fm) <= opt.f_tol &&
        hi - lo <= opt.x_rel_tol * std::max(1.0, std::fabs(mid)))
      return mid;
  }
  if (hi - lo <= 1e-9 * std::max(1.0, std::fabs(mid))) return 0.5 * (lo + hi);
  throw convergence_error("bisect: no convergence in " +
                          std::to_string(opt.max_iter) + " iterations");
}

}  // namespace fhal
