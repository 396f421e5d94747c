#pragma once

// Scalar decay-rate machinery for the coupled fractional Halanay
// inequality pair
//
//   D^a u(t) <= -a u(t) + b sup u[t-tau1,t] + e sup v[t-tau2,t] + f
//     v(t)   <=  c u(t) + d sup v[t-tau3,t]
//
// Feasibility requires a > b + e c/(1-d) > 0 with 0 <= d < 1.  The decay
// rate lambda* is the unique root of the characteristic function
//
//   h(L) = L - a + b/E_a(-L tau1^a) + e c / [(E_a(-L tau3^a) - d) E_a(-L tau2^a)]
//
// on (0, lambda0), where lambda0 solves E_a(-L tau3^a) = d.  h is strictly
// increasing there and blows up at lambda0, so bisection is unconditional.

#include <cmath>
#include <functional>
#include <limits>
#include <string>

#include "fhal/errors.hpp"
#include "fhal/mittag_leffler.hpp"
#include "fhal/roots.hpp"

namespace fhal {

struct HalanayParams {
  double alpha = 0.5;
  double a = 1.0, b = 0.0, c = 0.0, d = 0.0, e = 0.0, f = 0.0;
  double tau1 = 1.0, tau2 = 1.0, tau3 = 1.0;

  double tau() const { return std::max(tau1, std::max(tau2, tau3)); }
  FractionalOrder order() const { return FractionalOrder(alpha); }
};

struct FeasibilityReport {
  bool feasible = false;
  double margin = 0.0;  // a - b - e c/(1-d), reported even when infeasible
  std::string reason;   // empty when feasible
};

inline FeasibilityReport check_feasibility(const HalanayParams& p) {
  if (!(p.tau1 > 0.0) || !(p.tau2 > 0.0) || !(p.tau3 > 0.0))
    throw std::domain_error("check_feasibility: delays must be positive");
  FractionalOrder order(p.alpha);  // validates alpha
  (void)order;
  FeasibilityReport r;
  r.margin = p.a - p.b - p.e * p.c / (1.0 - p.d);
  if (p.b < 0.0 || p.c < 0.0 || p.e < 0.0 || p.f < 0.0)
    r.reason = "b, c, e, f must be nonnegative";
  else if (!(p.d >= 0.0) || !(p.d < 1.0))
    r.reason = "d must lie in [0, 1)";
  else if (!(p.a > 0.0))
    r.reason = "a must be positive";
  else if (!(r.margin > 0.0))
    r.reason = "a - b - e*c/(1-d) must be positive";
  r.feasible = r.reason.empty();
  return r;
}

// Unique lambda0 > 0 with E_a(-lambda0 tau3^a) = d; +infinity when d = 0.
inline double lambda0(const HalanayParams& p) {
  if (!(p.d >= 0.0) || !(p.d < 1.0))
    throw std::domain_error("lambda0: d must lie in [0, 1)");
  if (p.d == 0.0) return std::numeric_limits<double>::infinity();
  FractionalOrder order(p.alpha);
  double hi = 1.0;
  while (ml_decay(order, hi, p.tau3) > p.d) {
    hi *= 2.0;
    if (hi > 1e300) throw convergence_error("lambda0: bracket expansion failed");
  }
  auto g = [&](double L) { return p.d - ml_decay(order, L, p.tau3); };
  BisectOptions opt;
  opt.f_tol = 1e-13;
  opt.x_rel_tol = 1e-13;
  return bisect_increasing(g, 0.0, hi, opt);
}

// h(lambda); domain error when the tau3 denominator is not positive.
inline double char_fn(const HalanayParams& p, double lambda) {
  if (!(lambda >= 0.0)) throw std::domain_error("char_fn: lambda must be >= 0");
  FractionalOrder order(p.alpha);
  double h = lambda - p.a;
  if (p.b != 0.0) h += p.b / ml_decay(order, lambda, p.tau1);
  if (p.e * p.c != 0.0) {
    double den3 = ml_decay(order, lambda, p.tau3) - p.d;
    if (!(den3 > 0.0))
      throw std::domain_error("char_fn: lambda >= lambda0 (E_a(-L tau3^a) <= d)");
    h += p.e * p.c / (den3 * ml_decay(order, lambda, p.tau2));
  } else if (p.d > 0.0) {
    double den3 = ml_decay(order, lambda, p.tau3) - p.d;
    if (!(den3 > 0.0))
      throw std::domain_error("char_fn: lambda >= lambda0 (E_a(-L tau3^a) <= d)");
  }
  return h;
}

// Unique positive root of h on (0, lambda0).
inline double solve_lambda_star(const HalanayParams& p, double tol = 1e-10) {
  FeasibilityReport fr = check_feasibility(p);
  if (!fr.feasible)
    throw infeasibility_error("solve_lambda_star: " + fr.reason);
  if (!(tol > 0.0)) throw std::domain_error("solve_lambda_star: tol must be positive");

  double L0 = lambda0(p);
  double hi;
  if (std::isinf(L0)) {
    hi = std::max(p.a, 1.0);
    int guard = 0;
    while (char_fn(p, hi) <= 0.0) {
      hi *= 2.0;  // h(L) >= L - a, so this terminates
      if (++guard > 200) throw convergence_error("solve_lambda_star: no upper bracket");
    }
  } else {
    hi = L0 * (1.0 - 1e-6);
    int guard = 0;
    while (char_fn(p, hi) <= 0.0) {
      hi = L0 - 0.1 * (L0 - hi);  // approach the singularity where h -> +inf
      if (++guard > 60) throw convergence_error("solve_lambda_star: no upper bracket");
    }
  }
  BisectOptions opt;
  opt.f_tol = tol;
  opt.x_rel_tol = 1e-12;
  return bisect_increasing([&](double L) { return char_fn(p, L); }, 0.0, hi, opt);
}

// The unique solution of {(a-b) g1 - e g2 = f, c g1 - (1-d) g2 = 0}:
//   g1 = (1-d) f / [(1-d)(a-b) - c e],  g2 = c f / [(1-d)(a-b) - c e].
inline std::pair<double, double> gamma_constants(const HalanayParams& p) {
  double den = (1.0 - p.d) * (p.a - p.b) - p.c * p.e;
  if (!(den > 0.0))
    throw infeasibility_error("gamma_constants: (1-d)(a-b) - c e must be positive");
  return {(1.0 - p.d) * p.f / den, p.c * p.f / den};
}

// Mittag-Leffler decay envelopes
//   u(t) <= M E_a(-L* t^a) + gamma1
//   v(t) <= v_scale M E_a(-L* t^a) + gamma2 (+ geometric extension, below)
//
// When c = 0 with a nonzero v-history the theorem's M construction has no
// v-constraint to satisfy; v then obeys v(t) <= d sup v[t-tau3,t] alone,
// which yields the geometric bound sup_v0 d^(floor(t/tau3)+1).  That term
// is carried separately and flagged, and the forcing f is inflated by
// e*sup_v0 so the u-envelope stays valid against the v sup-window.
struct DecayEnvelope {
  double alpha = 0.5;
  double M = 0.0;
  double lambda_star = 0.0;
  double gamma1 = 0.0, gamma2 = 0.0;
  double v_scale = 0.0;
  double tau3 = 1.0;
  double d = 0.0;
  double v_geo_amp = 0.0;          // sup_v0 when the c = 0 extension is active
  bool v_geometric_extension = false;

  double u_bound(double t) const {
    return M * ml_decay(FractionalOrder(alpha), lambda_star, t) + gamma1;
  }
  double v_bound(double t) const {
    double v = v_scale * M * ml_decay(FractionalOrder(alpha), lambda_star, t) + gamma2;
    if (v_geo_amp > 0.0)
      v += v_geo_amp * std::pow(d, std::floor(t / tau3) + 1.0);
    return v;
  }
};

inline DecayEnvelope build_envelope(const HalanayParams& p, double sup_u0,
                                    double sup_v0, double tol = 1e-10) {
  if (!(sup_u0 >= 0.0) || !(sup_v0 >= 0.0))
    throw std::domain_error("build_envelope: history suprema must be >= 0");
  DecayEnvelope env;
  env.alpha = p.alpha;
  env.tau3 = p.tau3;
  env.d = p.d;
  env.lambda_star = solve_lambda_star(p, tol);
  double den3 = ml_decay(p.order(), env.lambda_star, p.tau3) - p.d;
  if (p.c > 0.0) {
    env.v_scale = p.c / den3;
    env.M = std::max(sup_u0, sup_v0 * den3 / p.c);
    auto g = gamma_constants(p);
    env.gamma1 = g.first;
    env.gamma2 = g.second;
  } else {
    env.v_scale = 0.0;
    env.M = sup_u0;
    HalanayParams q = p;
    if (sup_v0 > 0.0 && p.e > 0.0) q.f = p.f + p.e * sup_v0;
    auto g = gamma_constants(q);
    env.gamma1 = g.first;
    env.gamma2 = g.second;  // zero, since c = 0
    if (sup_v0 > 0.0) {
      env.v_geo_amp = sup_v0;
      env.v_geometric_extension = true;
    }
  }
  return env;
}

// Dense-sampling supremum of a scalar function on [lo, hi]; lower bound of
// the true sup, refined by the sample count.
template <typename F>
double sampled_sup(const F& f, double lo, double hi, int samples = 4096) {
  double m = std::max(f(lo), f(hi));
  for (int i = 1; i < samples; ++i) {
    double t = lo + (hi - lo) * static_cast<double>(i) / samples;
    m = std::max(m, f(t));
  }
  return m;
}

}  // namespace fhal
