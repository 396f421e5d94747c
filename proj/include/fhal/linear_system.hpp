#pragma once

// The Section-3 pipeline for the coupled linear fractional delay system
//
//   D^a x(t) = A x(t) + B x(t-tau1) + E y(t-tau2)
//     y(t)   = C x(t) + D y(t-tau3)
//
// with histories phi, psi satisfying the compatibility condition
// C phi(0) + D psi(-tau3) = psi(0).  The system is lifted to its positive
// representation, scalar coefficients are extracted as column-sum bounds,
// and the Halanay solver turns them into Mittag-Leffler decay envelopes
// for |x_i(t)| and |y_i(t)|.

#include <cmath>
#include <optional>
#include <string>

#include "fhal/halanay.hpp"
#include "fhal/history.hpp"
#include "fhal/matrix.hpp"
#include "fhal/posrep.hpp"

namespace fhal {

struct CoupledLinearSystem {
  Matrix A, B, E, C, D;
  double tau1 = 1.0, tau2 = 1.0, tau3 = 1.0;
  double alpha = 0.5;
  HistoryFunction phi, psi;

  std::size_t dim_x() const { return A.rows(); }
  std::size_t dim_y() const { return D.rows(); }
  double tau() const { return std::max(tau1, std::max(tau2, tau3)); }

  void validate() const {
    const std::size_t d = dim_x(), n = dim_y();
    if (!A.square() || A.rows() != d) throw std::invalid_argument("system: A must be d x d");
    if (B.rows() != d || B.cols() != d) throw std::invalid_argument("system: B must be d x d");
    if (E.rows() != d || E.cols() != n) throw std::invalid_argument("system: E must be d x n");
    if (C.rows() != n || C.cols() != d) throw std::invalid_argument("system: C must be n x d");
    if (!D.square() || D.rows() != n) throw std::invalid_argument("system: D must be n x n");
    if (!(tau1 > 0.0) || !(tau2 > 0.0) || !(tau3 > 0.0))
      throw std::invalid_argument("system: delays must be positive");
    if (!A.all_finite() || !B.all_finite() || !E.all_finite() || !C.all_finite() ||
        !D.all_finite())
      throw std::invalid_argument("system: matrix entries must be finite");
    if (!phi.valid() || phi.dim() != d) throw std::invalid_argument("system: phi has wrong dimension");
    if (!psi.valid() || psi.dim() != n) throw std::invalid_argument("system: psi has wrong dimension");
    FractionalOrder check(alpha);
    (void)check;
  }
};

// ||C phi(0) + D psi(-tau3) - psi(0)||_inf
inline double check_compatibility(const CoupledLinearSystem& s) {
  Vector lhs = s.C * s.phi(0.0) + s.D * s.psi(-s.tau3);
  return norm_inf(lhs - s.psi(0.0));
}

inline constexpr double kCompatRelTol = 1e-9;

inline bool compatibility_ok(const CoupledLinearSystem& s) {
  return check_compatibility(s) <= kCompatRelTol * (1.0 + norm_inf(s.psi(0.0)));
}

// Positive representation: dimensions double, the lifted matrices are
// Gamma(A), Pi(B), Pi(E), Pi(C), Pi(D) and the lifted histories are the
// pointwise min-positive representations of phi and psi.
inline CoupledLinearSystem lift_system(const CoupledLinearSystem& s) {
  s.validate();
  if (!compatibility_ok(s))
    throw std::invalid_argument(
        "lift_system: compatibility condition C phi(0) + D psi(-tau3) = psi(0) "
        "violated (residual " + std::to_string(check_compatibility(s)) + ")");
  CoupledLinearSystem lifted;
  lifted.A = gamma_metzler(s.A);
  lifted.B = pi_mat(s.B);
  lifted.E = pi_mat(s.E);
  lifted.C = pi_mat(s.C);
  lifted.D = pi_mat(s.D);
  lifted.tau1 = s.tau1;
  lifted.tau2 = s.tau2;
  lifted.tau3 = s.tau3;
  lifted.alpha = s.alpha;
  HistoryFunction phi = s.phi, psi = s.psi;
  lifted.phi = HistoryFunction::callable(
      2 * s.dim_x(), [phi](double t) { return pi_vec(phi(t)); });
  lifted.psi = HistoryFunction::callable(
      2 * s.dim_y(), [psi](double t) { return pi_vec(psi(t)); });
  return lifted;
}

struct ScalarCoeffs {
  double a0 = 0.0, b0 = 0.0, c0 = 0.0, d0 = 0.0, e0 = 0.0;
};

// a0 = -max column sum of Gamma(A); b0, e0, c0, d0 = max column sums of the
// lifted B, E, C, D.  Column sums of Pi(M) equal column sums of |M|, and a
// column sum of Gamma(A) is a_jj + sum_{i != j} |a_ij|, so everything is
// computed on the original matrices.
inline ScalarCoeffs extract_coeffs(const CoupledLinearSystem& s) {
  ScalarCoeffs c;
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < s.A.cols(); ++j) {
    double col = s.A(j, j);
    for (std::size_t i = 0; i < s.A.rows(); ++i)
      if (i != j) col += std::fabs(s.A(i, j));
    worst = std::max(worst, col);
  }
  c.a0 = -worst;
  c.b0 = max_column_sum(abs_part(s.B));
  c.e0 = max_column_sum(abs_part(s.E));
  c.c0 = max_column_sum(abs_part(s.C));
  c.d0 = max_column_sum(abs_part(s.D));
  return c;
}

struct StabilityReport {
  ScalarCoeffs coeffs;
  bool feasible = false;
  double margin = 0.0;
  std::string infeasible_reason;        // empty when feasible
  double lambda_star = 0.0;             // valid when feasible
  double lambda_0 = 0.0;                // +inf when d0 = 0
  std::optional<DecayEnvelope> envelope;
  double sup_u0 = 0.0, sup_v0 = 0.0;    // sup of summed lifted histories
  double compat_residual = 0.0;
  std::size_t lifted_dim_x = 0, lifted_dim_y = 0;
  // The history bound M follows the proof's summed lifted trajectories
  // (X~ = sum_i x~_i), i.e. sup_t ||phi(t)||_1 and sup_t ||psi(t)||_1.
  std::string m_note =
      "M derives from sup-norms of the summed lifted histories "
      "sup ||phi||_1, sup ||psi||_1";
};

inline HalanayParams to_halanay(const ScalarCoeffs& c, const CoupledLinearSystem& s) {
  HalanayParams p;
  p.alpha = s.alpha;
  p.a = c.a0;
  p.b = c.b0;
  p.c = c.c0;
  p.d = c.d0;
  p.e = c.e0;
  p.f = 0.0;  // the linear system carries no forcing
  p.tau1 = s.tau1;
  p.tau2 = s.tau2;
  p.tau3 = s.tau3;
  return p;
}

// Full pipeline.  An infeasible criterion yields feasible = false (the
// theorem is sufficient, not necessary: the result is inconclusive, never
// "unstable"), with no exception.
inline StabilityReport analyze(const CoupledLinearSystem& s, double tol = 1e-10) {
  s.validate();
  StabilityReport rep;
  rep.compat_residual = check_compatibility(s);
  if (rep.compat_residual > kCompatRelTol * (1.0 + norm_inf(s.psi(0.0))))
    throw std::invalid_argument(
        "analyze: compatibility condition violated (residual " +
        std::to_string(rep.compat_residual) + ")");
  rep.coeffs = extract_coeffs(s);
  rep.lifted_dim_x = 2 * s.dim_x();
  rep.lifted_dim_y = 2 * s.dim_y();
  HalanayParams p = to_halanay(rep.coeffs, s);
  FeasibilityReport fr = check_feasibility(p);
  rep.margin = fr.margin;
  rep.feasible = fr.feasible;
  if (!fr.feasible) {
    rep.infeasible_reason = fr.reason;
    return rep;
  }
  const double tau = s.tau();
  rep.sup_u0 = sampled_sup([&](double t) { return norm_1(s.phi(t)); }, -tau, 0.0);
  rep.sup_v0 = sampled_sup([&](double t) { return norm_1(s.psi(t)); }, -tau, 0.0);
  rep.lambda_0 = lambda0(p);
  rep.envelope = build_envelope(p, rep.sup_u0, rep.sup_v0, tol);
  rep.lambda_star = rep.envelope->lambda_star;
  return rep;
}

}  // namespace fhal
