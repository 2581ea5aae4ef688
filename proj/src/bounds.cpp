#include "hypflow/bounds.hpp"

#include <algorithm>
#include <cmath>

namespace hypflow {

double a_theta(double theta, double kappa1) {
  if (theta < 0.0 || theta >= half_pi)
    throw DomainError("a(theta) needs theta in [0, pi/2)");
  return std::acosh(1.0 / std::cos(theta)) / kappa1;
}

double f_delta(double delta, double kappa1) {
  if (!(delta > 0.0) || delta > 0.5)
    throw DomainError("f(delta) needs delta in (0, 1/2]");
  return 2.0 * std::asin(std::sinh(kappa1 * delta) /
                         std::sinh(kappa1 * (1.0 - delta)));
}

BoundConstants make_constants(CurvatureBounds cb, double t0, double inj_radius) {
  if (!(cb.kappa1 > 0.0) || cb.kappa2 < cb.kappa1)
    throw DomainError("curvature bounds need 0 < kappa1 <= kappa2");
  if (!(t0 > 1.0)) throw DomainError("t0 must exceed 1");
  if (!(inj_radius > 0.0)) throw DomainError("injectivity radius must be positive");

  const double k1 = cb.kappa1, k2 = cb.kappa2;
  const double ratio = k2 / k1;

  BoundConstants c;
  c.kappa1 = k1;
  c.kappa2 = k2;
  c.theta0 = (pi / 8.0) * k1 / (k2 + k1);
  c.theta0_proof = (pi / 8.0) * k1 / (k2 + 2.0 * k1);
  c.eps0 = (pi / 16.0) * k1 / (k1 + k2);
  c.rho_coeff = 2.0 * (ratio + 1.0);
  c.C_main = (2.0 / k1) * (2.0 * ratio + 3.0) * std::max(two_pi, k1);
  c.C_intro = (4.0 * pi / k1) * (2.0 * ratio + 3.0);
  c.C_tilde = (4.0 * pi / k1) * (ratio + 1.0);
  c.partner_len_coeff = 18.0 / k1 + 16.0 * k2 / (k1 * k1);
  c.partner_dist_coeff = 25.0 / k1 + 24.0 * k2 / (k1 * k1);
  c.pseudo_len_coeff = (8.0 / k1) * (ratio + 1.0);
  c.pseudo_dist_coeff = (12.0 / k1) * (ratio + 1.0);
  c.pseudo_gap_coeff = (32.0 / k1) * (ratio + 1.0);
  c.delta0 = std::min({c.theta0 / std::max(two_pi, k1), pi / (2.0 * k1),
                       0.5 - 1e-9});
  c.t0 = t0;
  c.rho = 2.0 * inj_radius;
  c.b_inj = 2.0 * (std::cosh(k2 * c.rho) - 1.0);

  // Grid supremum of (cosh(k2 a(rho(2 eps))) - 1)/eps^2 over (0, eps0],
  // widened by 10%; rho(2 eps0) = pi/4 keeps a() inside its domain.
  const int n = 10000;
  double sup = 0.0;
  for (int i = 1; i <= n; ++i) {
    const double eps = c.eps0 * static_cast<double>(i) / n;
    const double v =
        (std::cosh(k2 * a_theta(c.rho_coeff * 2.0 * eps, k1)) - 1.0) /
        (eps * eps);
    sup = std::max(sup, v);
  }
  c.D_num = 1.1 * sup;
  return c;
}

double loop_length_lower_bound(double eps, double kappa, double rho) {
  if (!(eps > 0.0) || eps >= pi)
    throw DomainError("loop bound needs eps in (0, pi)");
  const double b = 2.0 * (std::cosh(kappa * rho) - 1.0);
  const double s = std::sin(eps / 2.0);
  return std::acosh(b / (2.0 * s * s) + 1.0) / kappa;
}

std::pair<double, double> tprime_bounds(double T1, double T2, double eps,
                                        CurvatureBounds cb, double b) {
  if (!(eps > 0.0) || eps >= pi)
    throw DomainError("tprime bounds need eps in (0, pi)");
  if (!(b > 0.0)) throw DomainError("tprime bounds need b > 0");
  const double k1 = cb.kappa1, k2 = cb.kappa2;
  const double s2 = 2.0 * std::sin(eps / 2.0) * std::sin(eps / 2.0);  // 1-cos
  const double min_cosh = b / s2 + 1.0;
  const double slack = 1.0 + 1e-12;
  if (std::cosh(k2 * T1) * slack < min_cosh ||
      std::cosh(k2 * T2) * slack < min_cosh)
    throw HypothesisViolated("loop periods below the admissible minimum");

  const double ql = (1.0 - 8.0 * (b + 2.0) * (b + 2.0) /
                               (std::pow(b + 2.0, 4) + 16.0)) /
                    (pi * pi) * eps * eps;
  const double qu = eps * eps / 4.0 +
                    std::pow(eps / (std::sqrt(2.0) * b), 4.0 * k1 / k2);
  if (qu >= 1.0)
    throw DomainError("upper tprime bound vacuous: log argument not positive");
  const double lower = -std::log1p(-ql) / k2;
  const double upper = -std::log1p(-qu) / k1;
  return {lower, upper};
}

double tprime_lower_quadratic_coeff(double b, double kappa2) {
  return (1.0 - 8.0 * (b + 2.0) * (b + 2.0) / (std::pow(b + 2.0, 4) + 16.0)) /
         (pi * pi * kappa2);
}

}  // namespace hypflow
