#pragma once

// Every named constant and scalar bound function used by the verification
// experiments, evaluated by its closed form from pinching data
// -kappa2^2 <= K <= -kappa1^2.

#include <utility>

#include "hypflow/hyp2.hpp"

namespace hypflow {

struct CurvatureBounds {
  double kappa1 = 1.0;
  double kappa2 = 1.0;  // 0 < kappa1 <= kappa2
};

/// a(theta) = (1/kappa1) arcosh(1/cos theta), defined for theta in [0, pi/2).
/// Monotone increasing there; a(theta) <= (2/kappa1) theta for theta <= pi/4.
double a_theta(double theta, double kappa1);

/// f(delta) = 2 arcsin( sinh(kappa1 delta) / sinh(kappa1 (1-delta)) ) on
/// (0, 1/2]; f(1/2) = pi and f(delta) <= 2 pi delta.
double f_delta(double delta, double kappa1);

struct BoundConstants {
  double kappa1 = 1.0;
  double kappa2 = 1.0;

  double theta0 = 0.0;        // (pi/8) k1/(k2 + k1), cone-contraction aperture
  double theta0_proof = 0.0;  // (pi/8) k1/(k2 + 2 k1): the proof's variant,
                              // recorded but not used
  double eps0 = 0.0;          // (pi/16) k1/(k1 + k2) = theta0 / 2
  double delta0 = 0.0;        // admissible recurrence size for the closing lemma

  double C_main = 0.0;   // (2/k1)(2 k2/k1 + 3) max{2 pi, k1}
  double C_intro = 0.0;  // (4 pi/k1)(2 k2/k1 + 3); equals C_main when k1 <= 2 pi
  double C_tilde = 0.0;  // (4 pi/k1)(k2/k1 + 1), foot-point closing variant

  double rho_coeff = 0.0;  // rho(theta) = 2 (k2/k1 + 1) theta

  double partner_len_coeff = 0.0;   // 18/k1 + 16 k2/k1^2
  double partner_dist_coeff = 0.0;  // 25/k1 + 24 k2/k1^2
  double pseudo_len_coeff = 0.0;    // (8/k1)(k2/k1 + 1)
  double pseudo_dist_coeff = 0.0;   // (12/k1)(k2/k1 + 1)
  double pseudo_gap_coeff = 0.0;    // (32/k1)(k2/k1 + 1)

  double t0 = 5.0;     // configured, not derived
  double rho = 0.0;    // 2 inj(M), caller supplied
  double b_inj = 0.0;  // b = 2 (cosh(k2 rho) - 1)
  double D_num = 0.0;  // numeric constant with cosh(k2 a(rho(2 eps))) <= 1 + D eps^2

  double rho_of(double theta) const { return rho_coeff * theta; }
};

/// Fills every constant by its closed form.
///   delta0 = min{ theta0/max{2 pi, k1}, pi/(2 k1), 1/2 - 1e-9 };
///   D_num  = 1.1 * sup over a 10^4 grid of eps in (0, eps0] of
///            (cosh(k2 a(rho(2 eps))) - 1) / eps^2.
BoundConstants make_constants(CurvatureBounds cb, double t0 = 5.0,
                              double inj_radius = 0.025);

/// Shortest admissible geodesic loop closing at angle eps:
/// (1/kappa) arcosh( b/(1 - cos eps) + 1 ) with b = 2 (cosh(kappa rho) - 1).
double loop_length_lower_bound(double eps, double kappa, double rho);

/// Two-sided bracket for T - T' in a geodesic triangle with angle pi - eps
/// and leg lengths T1, T2 each admissible as loop periods for the given b:
///   lower = -(1/k2) log( 1 - (1/pi^2)(1 - 8 (b+2)^2 / ((b+2)^4 + 16)) eps^2 )
///   upper = -(1/k1) log( 1 - eps^2/4 - (eps/(sqrt(2) b))^{4 k1/k2} ).
/// Throws HypothesisViolated when a leg is too short and DomainError when a
/// log argument is not positive (the upper bound is vacuous for eps >> b).
std::pair<double, double> tprime_bounds(double T1, double T2, double eps,
                                        CurvatureBounds cb, double b);

/// Quadratic Taylor coefficient of the lower tprime bound at eps = 0:
/// lower(eps) >= C1 eps^2 with C1 = (1/(k2 pi^2))(1 - 8(b+2)^2/((b+2)^4+16)).
double tprime_lower_quadratic_coeff(double b, double kappa2);

}  // namespace hypflow
