#pragma once

// Caputo fractional delay-differential-equation simulator: the fractional
// Adams-Bashforth-Moulton predictor-corrector (Diethelm, Ford & Freed) with
// product-rectangle predictor and product-trapezoid corrector weights, one
// corrector pass, full-history sums (no short-memory truncation).  Delays
// must be exact multiples of the step, so delayed lookups are grid reads
// and the algebraic y-recursions are exact.

#include <cmath>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "fhal/errors.hpp"
#include "fhal/gamma.hpp"
#include "fhal/history.hpp"
#include "fhal/linear_system.hpp"
#include "fhal/matrix.hpp"

namespace fhal {

struct MeshConfig {
  double dt = 1e-2;
  double T_end = 1.0;

  static constexpr double kCommensurateTol = 1e-9;
  static constexpr std::size_t kMaxSteps = 1000000;  // O(N^2) history sums
  static constexpr double kDivergenceGuard = 1e12;

  std::size_t steps() const {
    if (!(dt > 0.0)) throw mesh_error("mesh: dt must be positive");
    if (!(T_end > dt)) throw mesh_error("mesh: T_end must exceed dt");
    double n = T_end / dt;
    if (n > static_cast<double>(kMaxSteps))
      throw mesh_error("mesh: T_end/dt exceeds the " +
                       std::to_string(kMaxSteps) + "-step memory guard");
    return static_cast<std::size_t>(std::llround(n));
  }

  std::size_t delay_steps(double tau) const {
    double m = tau / dt;
    double r = std::fabs(m - std::nearbyint(m));
    if (std::nearbyint(m) < 1.0 || r > kCommensurateTol * std::max(1.0, m))
      throw mesh_error("mesh: delay " + std::to_string(tau) +
                       " is not a positive multiple of dt = " + std::to_string(dt) +
                       "; nearest commensurate dt is " +
                       std::to_string(tau / std::max(1.0, std::ceil(m))));
    return static_cast<std::size_t>(std::llround(m));
  }
};

inline double float_gcd(double a, double b, double tol = 1e-9) {
  a = std::fabs(a);
  b = std::fabs(b);
  if (a < b) std::swap(a, b);
  while (b > tol) {
    double r = std::fmod(a, b);
    if (r < tol || b - r < tol) r = 0.0;
    a = b;
    b = r;
  }
  return a;
}

// Largest dt <= dt_target that divides every delay (within tolerance).
inline double auto_commensurate_dt(double dt_target, const std::vector<double>& delays) {
  if (!(dt_target > 0.0)) throw mesh_error("auto mesh: dt must be positive");
  double g = 0.0;
  for (double tau : delays) {
    if (!(tau > 0.0)) throw mesh_error("auto mesh: delays must be positive");
    g = g == 0.0 ? tau : float_gcd(g, tau);
  }
  if (g == 0.0) return dt_target;
  double m = std::ceil(g / dt_target - 1e-12);
  return g / std::max(1.0, m);
}

// Uniform-grid trajectory including the history segment: states[i] is the
// state at t = (i - hist_steps) * dt, i = 0 .. hist_steps + n_steps.
struct Trajectory {
  double dt = 0.0;
  std::size_t hist_steps = 0;
  std::vector<Vector> states;

  double time(std::size_t i) const {
    return (static_cast<double>(i) - static_cast<double>(hist_steps)) * dt;
  }
  std::size_t size() const { return states.size(); }
  std::size_t dim() const { return states.empty() ? 0 : states.front().size(); }
  // state at step n, n in [-hist_steps, n_steps]
  const Vector& at_step(std::ptrdiff_t n) const {
    return states[static_cast<std::size_t>(n + static_cast<std::ptrdiff_t>(hist_steps))];
  }
  std::size_t first_current_index() const { return hist_steps; }  // t = 0
};

namespace sim_detail {

// Shared fractional ABM state for one scalar/vector Caputo equation
// D^a u = F(t, u).  The caller supplies F through two callbacks so delayed
// terms can read the surrounding trajectory: rhs(n, u_n) is evaluated with
// the predicted state first, then with the corrected state, which becomes
// the stored F_n.
class AbmIntegrator {
 public:
  AbmIntegrator(double alpha, double dt, std::size_t n_steps, Vector u0)
      : alpha_(alpha),
        dt_(dt),
        hga1_(std::pow(dt, alpha) / tgamma_pos(alpha + 1.0)),
        hga2_(std::pow(dt, alpha) / tgamma_pos(alpha + 2.0)),
        u0_(std::move(u0)),
        dim_(u0_.size()) {
    pow_a_.resize(n_steps + 2);
    pow_a1_.resize(n_steps + 2);
    for (std::size_t m = 0; m < pow_a_.size(); ++m) {
      pow_a_[m] = std::pow(static_cast<double>(m), alpha_);
      pow_a1_[m] = std::pow(static_cast<double>(m), alpha_ + 1.0);
    }
    states_.push_back(u0_);
    rhs_.reserve(n_steps + 1);
  }

  const Vector& state(std::size_t n) const { return states_[n]; }
  std::size_t computed_steps() const { return states_.size() - 1; }

  // F_0 must be pushed once before the first step.
  void push_rhs(Vector f0) { rhs_.push_back(std::move(f0)); }

  Vector predict() const {
    const std::size_t n = states_.size();
    Vector acc(dim_, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      double w = pow_a_[n - j] - pow_a_[n - j - 1];
      const Vector& f = rhs_[j];
      for (std::size_t i = 0; i < dim_; ++i) acc[i] += w * f[i];
    }
    Vector u(dim_);
    for (std::size_t i = 0; i < dim_; ++i) u[i] = u0_[i] + hga1_ * acc[i];
    return u;
  }

  Vector correct(const Vector& f_pred) const {
    const std::size_t n = states_.size();
    Vector acc(dim_, 0.0);
    {  // j = 0 weight: (n-1)^{a+1} - (n-1-a) n^a
      double w = pow_a1_[n - 1] -
                 (static_cast<double>(n) - 1.0 - alpha_) * pow_a_[n];
      const Vector& f = rhs_[0];
      for (std::size_t i = 0; i < dim_; ++i) acc[i] += w * f[i];
    }
    for (std::size_t j = 1; j < n; ++j) {
      std::size_t m = n - j;
      double w = pow_a1_[m + 1] - 2.0 * pow_a1_[m] + pow_a1_[m - 1];
      const Vector& f = rhs_[j];
      for (std::size_t i = 0; i < dim_; ++i) acc[i] += w * f[i];
    }
    Vector u(dim_);
    for (std::size_t i = 0; i < dim_; ++i)
      u[i] = u0_[i] + hga2_ * (acc[i] + f_pred[i]);
    return u;
  }

  void accept(Vector u, Vector f_final) {
    if (norm_inf(u) > MeshConfig::kDivergenceGuard)
      throw divergence_error("simulate: state norm exceeded 1e12 at t = " +
                             std::to_string(states_.size() * dt_));
    states_.push_back(std::move(u));
    rhs_.push_back(std::move(f_final));
  }

 private:
  double alpha_, dt_, hga1_, hga2_;
  Vector u0_;
  std::size_t dim_;
  std::vector<double> pow_a_, pow_a1_;
  std::vector<Vector> states_;
  std::vector<Vector> rhs_;
};

inline Trajectory make_trajectory(double dt, std::size_t hist_steps,
                                  const HistoryFunction& hist) {
  Trajectory tr;
  tr.dt = dt;
  tr.hist_steps = hist_steps;
  tr.states.reserve(hist_steps + 1);
  for (std::size_t i = 0; i < hist_steps; ++i) {
    double t = (static_cast<double>(i) - static_cast<double>(hist_steps)) * dt;
    tr.states.push_back(hist(t));
  }
  return tr;  // caller appends states from t = 0 onward
}

}  // namespace sim_detail

// ---- coupled linear system (Section 3 dynamics) ---------------------------

struct CoupledTrajectories {
  Trajectory x;
  Trajectory y;
};

inline CoupledTrajectories simulate_coupled(const CoupledLinearSystem& s,
                                            const MeshConfig& mesh) {
  s.validate();
  if (!compatibility_ok(s))
    throw std::invalid_argument("simulate_coupled: compatibility condition violated");
  const std::size_t N = mesh.steps();
  const std::size_t m1 = mesh.delay_steps(s.tau1);
  const std::size_t m2 = mesh.delay_steps(s.tau2);
  const std::size_t m3 = mesh.delay_steps(s.tau3);
  const std::size_t mh = std::max(m1, std::max(m2, m3));
  const double dt = mesh.dt;

  Trajectory xt = sim_detail::make_trajectory(dt, mh, s.phi);
  Trajectory yt = sim_detail::make_trajectory(dt, mh, s.psi);

  std::vector<Vector> ys;  // y at steps 0..N
  ys.reserve(N + 1);

  auto x_delayed = [&](const sim_detail::AbmIntegrator& abm, std::ptrdiff_t n,
                       std::size_t m) -> Vector {
    std::ptrdiff_t j = n - static_cast<std::ptrdiff_t>(m);
    if (j < 0) return s.phi(static_cast<double>(j) * dt);
    return abm.state(static_cast<std::size_t>(j));
  };
  auto y_delayed = [&](std::ptrdiff_t n, std::size_t m) -> Vector {
    std::ptrdiff_t j = n - static_cast<std::ptrdiff_t>(m);
    if (j < 0) return s.psi(static_cast<double>(j) * dt);
    return ys[static_cast<std::size_t>(j)];
  };

  Vector x0 = s.phi(0.0);
  sim_detail::AbmIntegrator abm(s.alpha, dt, N, x0);
  ys.push_back(s.C * x0 + s.D * s.psi(-s.tau3));  // equals psi(0) under (K)
  abm.push_rhs(s.A * x0 + s.B * s.phi(-s.tau1) + s.E * y_delayed(0, m2));

  for (std::size_t n = 1; n <= N; ++n) {
    Vector xb = x_delayed(abm, static_cast<std::ptrdiff_t>(n), m1);
    Vector yb = y_delayed(static_cast<std::ptrdiff_t>(n), m2);
    Vector xp = abm.predict();
    Vector fp = s.A * xp + s.B * xb + s.E * yb;
    Vector xn = abm.correct(fp);
    Vector fn = s.A * xn + s.B * xb + s.E * yb;
    abm.accept(xn, std::move(fn));
    ys.push_back(s.C * abm.state(n) +
                 s.D * y_delayed(static_cast<std::ptrdiff_t>(n), m3));
  }

  for (std::size_t n = 0; n <= N; ++n) xt.states.push_back(abm.state(n));
  for (std::size_t n = 0; n <= N; ++n) yt.states.push_back(ys[n]);
  return {std::move(xt), std::move(yt)};
}

// ---- worst-case Halanay comparison system ---------------------------------
//
// Integrates the inequalities taken with equality:
//   D^a u = -a u + b max u[t-tau1,t] + e max v[t-tau2,t] + f
//     v   =  c u + d max v[t-tau3,t]
// The window maxima include the current mesh point; the v-recursion is
// solved consistently (v_n appears in its own window when d > 0).
inline CoupledTrajectories simulate_halanay_comparison(const HalanayParams& p,
                                                       const HistoryFunction& phi,
                                                       const HistoryFunction& psi,
                                                       const MeshConfig& mesh) {
  FeasibilityReport fr = check_feasibility(p);
  if (!fr.feasible)
    throw infeasibility_error("simulate_halanay_comparison: " + fr.reason);
  if (phi.dim() != 1 || psi.dim() != 1)
    throw std::invalid_argument("simulate_halanay_comparison: scalar histories required");
  const std::size_t N = mesh.steps();
  const std::size_t m1 = mesh.delay_steps(p.tau1);
  const std::size_t m2 = mesh.delay_steps(p.tau2);
  const std::size_t m3 = mesh.delay_steps(p.tau3);
  const std::size_t mh = std::max(m1, std::max(m2, m3));
  const double dt = mesh.dt;

  // history values on the grid, indices -mh..-1 mapped to 0..mh-1
  std::vector<double> uh(mh), vh(mh);
  for (std::size_t i = 0; i < mh; ++i) {
    double t = (static_cast<double>(i) - static_cast<double>(mh)) * dt;
    uh[i] = phi(t)[0];
    vh[i] = psi(t)[0];
    if (uh[i] < 0.0 || vh[i] < 0.0)
      throw std::invalid_argument("simulate_halanay_comparison: histories must be >= 0");
  }
  std::vector<double> us, vs;
  us.reserve(N + 1);
  vs.reserve(N + 1);

  auto u_at = [&](std::ptrdiff_t j) {
    return j < 0 ? uh[static_cast<std::size_t>(j + static_cast<std::ptrdiff_t>(mh))]
                 : us[static_cast<std::size_t>(j)];
  };
  auto v_at = [&](std::ptrdiff_t j) {
    return j < 0 ? vh[static_cast<std::size_t>(j + static_cast<std::ptrdiff_t>(mh))]
                 : vs[static_cast<std::size_t>(j)];
  };
  // max over mesh points in [t_n - m dt, t_n], optionally overriding the
  // value at t_n (used with predicted states)
  auto window_max = [&](const auto& at, std::ptrdiff_t n, std::size_t m,
                        double current) {
    double best = current;
    for (std::ptrdiff_t j = n - static_cast<std::ptrdiff_t>(m); j < n; ++j)
      best = std::max(best, at(j));
    return best;
  };
  auto v_recursion = [&](std::ptrdiff_t n, double u_now) {
    double mprev = window_max(v_at, n, m3, -std::numeric_limits<double>::infinity());
    double cand = p.c * u_now + p.d * mprev;
    if (cand <= mprev || p.d == 0.0) return cand;
    return p.c * u_now / (1.0 - p.d);  // v_n tops its own window
  };
  auto rhs = [&](std::ptrdiff_t n, double u_now, double v_now) {
    return -p.a * u_now + p.b * window_max(u_at, n, m1, u_now) +
           p.e * window_max(v_at, n, m2, v_now) + p.f;
  };

  double u0 = phi(0.0)[0];
  sim_detail::AbmIntegrator abm(p.alpha, dt, N, Vector{u0});
  us.push_back(u0);
  vs.push_back(v_recursion(0, u0));
  abm.push_rhs(Vector{rhs(0, u0, vs[0])});

  for (std::size_t n = 1; n <= N; ++n) {
    std::ptrdiff_t sn = static_cast<std::ptrdiff_t>(n);
    double up = abm.predict()[0];
    double vp = v_recursion(sn, up);
    Vector fp{rhs(sn, up, vp)};
    double un = abm.correct(fp)[0];
    double vn = v_recursion(sn, un);
    us.push_back(un);
    vs.push_back(vn);
    abm.accept(Vector{un}, Vector{rhs(sn, un, vn)});
  }

  Trajectory ut = sim_detail::make_trajectory(dt, mh, phi);
  Trajectory vt = sim_detail::make_trajectory(dt, mh, psi);
  for (std::size_t n = 0; n <= N; ++n) ut.states.push_back(Vector{us[n]});
  for (std::size_t n = 0; n <= N; ++n) vt.states.push_back(Vector{vs[n]});
  return {std::move(ut), std::move(vt)};
}

// ---- neutral system of Hale type ------------------------------------------

struct NeutralSystem {
  Matrix N;      // neutral coupling, n x n
  double tau = 1.0;
  double alpha = 0.5;
  // f(t, y(t), y(t - tau), integral term)
  std::function<Vector(double, const Vector&, const Vector&, const Vector&)> f;
  // g(t, xi, y(xi)); empty means the distributed term vanishes
  std::function<Vector(double, double, const Vector&)> g;
  HistoryFunction phi;

  std::size_t dim() const { return N.rows(); }
};

// Integrates z(t) = y(t) - N y(t - tau) with D^a z = f(...), recovering
// y(t) = z(t) + N y(t - tau).  The distributed integral term uses the
// composite trapezoid rule on mesh points.
inline Trajectory simulate_neutral(const NeutralSystem& sys, const MeshConfig& mesh) {
  if (!sys.f) throw std::invalid_argument("simulate_neutral: f callback required");
  if (!sys.phi.valid() || sys.phi.dim() != sys.dim())
    throw std::invalid_argument("simulate_neutral: phi has wrong dimension");
  double n2 = norm_2_operator(sys.N);
  if (!(2.0 * n2 * n2 < 1.0))
    throw infeasibility_error("simulate_neutral: 2||N||^2 < 1 required, got ||N|| = " +
                              std::to_string(n2));
  const std::size_t N_steps = mesh.steps();
  const std::size_t m = mesh.delay_steps(sys.tau);
  const double dt = mesh.dt;

  std::vector<Vector> yv;  // y at steps 0..N
  yv.reserve(N_steps + 1);
  auto y_at = [&](std::ptrdiff_t j) -> Vector {
    if (j < 0) return sys.phi(static_cast<double>(j) * dt);
    return yv[static_cast<std::size_t>(j)];
  };
  // trapezoid over [t_n - tau, t_n]; y_now overrides the right endpoint
  auto integral_term = [&](std::ptrdiff_t n, const Vector& y_now) -> Vector {
    Vector acc(sys.dim(), 0.0);
    if (!sys.g) return acc;
    double tn = static_cast<double>(n) * dt;
    for (std::size_t i = 0; i <= m; ++i) {
      std::ptrdiff_t j = n - static_cast<std::ptrdiff_t>(m) + static_cast<std::ptrdiff_t>(i);
      double xi = static_cast<double>(j) * dt;
      Vector gj = sys.g(tn, xi, j == n ? y_now : y_at(j));
      double w = (i == 0 || i == m) ? 0.5 : 1.0;
      for (std::size_t q = 0; q < acc.size(); ++q) acc[q] += w * gj[q];
    }
    for (std::size_t q = 0; q < acc.size(); ++q) acc[q] *= dt;
    return acc;
  };

  Vector y0 = sys.phi(0.0);
  Vector z0 = y0 - sys.N * sys.phi(-sys.tau);
  sim_detail::AbmIntegrator abm(sys.alpha, dt, N_steps, z0);
  yv.push_back(y0);
  abm.push_rhs(sys.f(0.0, y0, sys.phi(-sys.tau), integral_term(0, y0)));

  for (std::size_t n = 1; n <= N_steps; ++n) {
    std::ptrdiff_t sn = static_cast<std::ptrdiff_t>(n);
    double tn = static_cast<double>(n) * dt;
    Vector ydel = y_at(sn - static_cast<std::ptrdiff_t>(m));
    Vector ndel = sys.N * ydel;
    Vector zp = abm.predict();
    Vector yp = zp + ndel;
    Vector fp = sys.f(tn, yp, ydel, integral_term(sn, yp));
    Vector zn = abm.correct(fp);
    Vector yn = zn + ndel;
    Vector fn = sys.f(tn, yn, ydel, integral_term(sn, yn));
    abm.accept(zn, std::move(fn));
    yv.push_back(std::move(yn));
  }

  Trajectory tr = sim_detail::make_trajectory(dt, m, sys.phi);
  for (std::size_t n = 0; n <= N_steps; ++n) tr.states.push_back(yv[n]);
  return tr;
}

// ---- envelope checking and tail-rate fitting -------------------------------

struct EnvelopeViolation {
  double t = 0.0, value = 0.0, bound = 0.0;
};

struct EnvelopeCheck {
  std::size_t checked = 0;
  std::vector<EnvelopeViolation> violations;
  double worst_excess = 0.0;  // max of value - inflated bound
  bool pass() const { return violations.empty(); }
};

// Flags every point with value > bound*(1+slack_rel) + slack_abs.
inline EnvelopeCheck check_envelope(const std::vector<double>& times,
                                    const std::vector<double>& values,
                                    const std::function<double(double)>& bound,
                                    double slack_rel, double slack_abs) {
  if (times.size() != values.size())
    throw std::invalid_argument("check_envelope: size mismatch");
  EnvelopeCheck res;
  for (std::size_t i = 0; i < times.size(); ++i) {
    double limit = bound(times[i]) * (1.0 + slack_rel) + slack_abs;
    ++res.checked;
    double excess = values[i] - limit;
    if (excess > 0.0) {
      res.violations.push_back({times[i], values[i], limit});
      res.worst_excess = std::max(res.worst_excess, excess);
    }
  }
  return res;
}

// Scalar series extraction for t >= 0.
inline std::vector<double> sample_times(const Trajectory& tr) {
  std::vector<double> t;
  t.reserve(tr.size() - tr.hist_steps);
  for (std::size_t i = tr.hist_steps; i < tr.size(); ++i) t.push_back(tr.time(i));
  return t;
}

template <typename Reducer>
std::vector<double> sample_series(const Trajectory& tr, Reducer reduce) {
  std::vector<double> v;
  v.reserve(tr.size() - tr.hist_steps);
  for (std::size_t i = tr.hist_steps; i < tr.size(); ++i)
    v.push_back(reduce(tr.states[i]));
  return v;
}

// Least-squares slope of log(value) against log(t) over [t_lo, t_hi].
inline double decay_rate_fit(const std::vector<double>& times,
                             const std::vector<double>& values, double t_lo,
                             double t_hi) {
  if (times.size() != values.size())
    throw std::invalid_argument("decay_rate_fit: size mismatch");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (times[i] < t_lo || times[i] > t_hi || !(times[i] > 0.0)) continue;
    if (!(values[i] > 0.0))
      throw std::domain_error("decay_rate_fit: samples must be positive on the window");
    double lx = std::log(times[i]);
    double ly = std::log(values[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++n;
  }
  if (n < 10)
    throw std::domain_error("decay_rate_fit: fewer than 10 points in the window");
  double denom = n * sxx - sx * sx;
  return (n * sxy - sx * sy) / denom;
}

}  // namespace fhal
