#include "doctest.h"

#include <cmath>

#include "hypflow/bounds.hpp"
#include "hypflow/rng.hpp"

using namespace hypflow;

TEST_CASE("a(theta): values, domain, monotonicity, linear bound") {
  CHECK(a_theta(0.0, 1.0) == 0.0);
  CHECK(a_theta(pi / 3.0, 1.0) ==
        doctest::Approx(std::log(2.0 + std::sqrt(3.0))).epsilon(1e-13));
  CHECK_THROWS_AS(a_theta(half_pi, 1.0), DomainError);
  CHECK_THROWS_AS(a_theta(-0.1, 1.0), DomainError);

  // long-double reference for the closed form
  for (int i = 1; i <= 100; ++i) {
    const double th = 1.5 * i / 101.0;
    const long double ref = std::acosh(1.0L / std::cos(static_cast<long double>(th)));
    CHECK(std::fabs(a_theta(th, 1.0) - static_cast<double>(ref)) <=
          1e-12 * static_cast<double>(ref));
  }

  for (double k1 : {0.5, 1.0, 3.0}) {
    double prev = -1.0;
    const double top = std::min(half_pi, half_pi / k1) - 1e-9;
    for (int i = 0; i <= 1000; ++i) {
      const double th = top * i / 1000.0;
      const double v = a_theta(th, k1);
      CHECK(v >= prev);  // monotone on [0, min(pi/2, pi/(2 k1))]
      prev = v;
      if (th <= pi / 4.0) CHECK(v <= 2.0 * th / k1 + 1e-15);
    }
  }
}

TEST_CASE("beta <= a(kappa1 beta) on [0, pi/(2 kappa1)]") {
  for (double k1 : {0.5, 1.0, 2.0}) {
    for (int i = 0; i <= 1000; ++i) {
      const double beta = (half_pi / k1) * i / 1001.0;
      CHECK(beta <= a_theta(k1 * beta, k1) + 1e-12);
    }
  }
}

TEST_CASE("f(delta): endpoint value, linear bound, domain") {
  CHECK(f_delta(0.5, 1.0) == doctest::Approx(pi).epsilon(1e-15));
  CHECK(std::fabs(f_delta(0.5, 2.7) - pi) <= 4e-16);
  CHECK(f_delta(0.25, 1.0) ==
        doctest::Approx(2.0 * std::asin(std::sinh(0.25) / std::sinh(0.75)))
            .epsilon(1e-13));
  CHECK(f_delta(0.25, 1.0) <= half_pi);
  CHECK_THROWS_AS(f_delta(0.0, 1.0), DomainError);
  CHECK_THROWS_AS(f_delta(0.6, 1.0), DomainError);

  for (double k1 : {0.5, 1.0, 2.0}) {
    for (int i = 1; i <= 1000; ++i) {
      const double d = 0.5 * i / 1000.0;
      CHECK(f_delta(d, k1) <= two_pi * d + 1e-12);
      const long double ref =
          2.0L * std::asin(std::sinh(static_cast<long double>(k1) * d) /
                           std::sinh(static_cast<long double>(k1) * (1.0L - d)));
      CHECK(std::fabs(f_delta(d, k1) - static_cast<double>(ref)) <= 1e-12 * pi);
    }
  }
}

TEST_CASE("make_constants at kappa1 = kappa2 = 1") {
  const BoundConstants c = make_constants({1.0, 1.0});
  CHECK(c.theta0 == doctest::Approx(pi / 16.0).epsilon(1e-15));
  CHECK(c.eps0 == doctest::Approx(pi / 32.0).epsilon(1e-15));
  CHECK(c.eps0 == c.theta0 / 2.0);  // exact identity of the two formulas
  CHECK(c.C_main == doctest::Approx(20.0 * pi).epsilon(1e-15));
  CHECK(c.C_intro == c.C_main);  // kappa1 <= 2 pi
  CHECK(c.C_tilde == doctest::Approx(8.0 * pi).epsilon(1e-15));
  CHECK(c.partner_len_coeff == doctest::Approx(34.0));
  CHECK(c.partner_dist_coeff == doctest::Approx(49.0));
  CHECK(c.pseudo_len_coeff == doctest::Approx(16.0));
  CHECK(c.pseudo_dist_coeff == doctest::Approx(24.0));
  CHECK(c.pseudo_gap_coeff == doctest::Approx(64.0));
  CHECK(c.delta0 == doctest::Approx(pi / 16.0 / two_pi).epsilon(1e-15));
  CHECK(c.rho_coeff == doctest::Approx(4.0));
}

TEST_CASE("make_constants at kappa1 = 1, kappa2 = 2 and domain errors") {
  const BoundConstants c = make_constants({1.0, 2.0});
  CHECK(c.rho_coeff == doctest::Approx(6.0));
  CHECK(c.partner_len_coeff == doctest::Approx(50.0));
  CHECK(c.eps0 == c.theta0 / 2.0);
  CHECK_THROWS_AS(make_constants({-1.0, 1.0}), DomainError);
  CHECK_THROWS_AS(make_constants({2.0, 1.0}), DomainError);
  CHECK_THROWS_AS(make_constants({1.0, 1.0}, 0.5), DomainError);
  CHECK_THROWS_AS(make_constants({1.0, 1.0}, 5.0, -1.0), DomainError);

  // C_main > C_intro once kappa1 > 2 pi
  const BoundConstants big = make_constants({7.0, 7.0});
  CHECK(big.C_main > big.C_intro);
}

TEST_CASE("D_num dominates the cone displacement on and off the grid") {
  for (auto [k1, k2] : {std::pair{1.0, 1.0}, std::pair{0.5, 1.0}}) {
    const BoundConstants c = make_constants({k1, k2});
    Rng rng(101);
    auto value = [&](double eps) {
      return std::cosh(k2 * a_theta(c.rho_of(2.0 * eps), k1)) - 1.0 -
             c.D_num * eps * eps;
    };
    for (int i = 1; i <= 10000; ++i) CHECK(value(c.eps0 * i / 10000.0) <= 0.0);
    for (int i = 0; i < 1000; ++i) CHECK(value(rng.uniform(1e-9, c.eps0)) <= 0.0);
  }
}

TEST_CASE("loop length lower bound") {
  const double rho = 1.0, kappa = 1.0;
  const double b = 2.0 * (std::cosh(kappa * rho) - 1.0);
  // eps -> pi: the bound degenerates to rho itself
  CHECK(loop_length_lower_bound(pi - 1e-9, kappa, rho) ==
        doctest::Approx(rho).epsilon(1e-6));
  CHECK(loop_length_lower_bound(0.1, kappa, rho) ==
        doctest::Approx(std::acosh(b / (1.0 - std::cos(0.1)) + 1.0))
            .epsilon(1e-12));
  CHECK_THROWS_AS(loop_length_lower_bound(0.0, 1.0, 1.0), DomainError);
  CHECK_THROWS_AS(loop_length_lower_bound(pi, 1.0, 1.0), DomainError);

  double prev = 1e300;
  for (int i = 1; i <= 1000; ++i) {
    const double eps = 1e-3 + (pi - 2e-3) * i / 1000.0;
    const double v = loop_length_lower_bound(eps, kappa, rho);
    CHECK(v <= prev + 1e-12);  // decreasing in eps
    prev = v;
  }
}

namespace {

// Exact third side of the constant-curvature comparison triangle with legs
// T1, T2 and enclosed angle pi - eps.
double law_of_cosines_tprime(double T1, double T2, double eps, double kappa) {
  const double c = std::cosh(kappa * (T1 + T2)) -
                   (1.0 - std::cos(eps)) * std::sinh(kappa * T1) *
                       std::sinh(kappa * T2);
  return std::acosh(c) / kappa;
}

}  // namespace

TEST_CASE("tprime bounds bracket the exact law-of-cosines value") {
  const CurvatureBounds cb{1.0, 1.0};
  // rho small enough that legs of length 5 satisfy the loop hypothesis at
  // eps = 0.1, and large enough that the upper bound is non-vacuous
  const double rho = 0.4;
  const double b = 2.0 * (std::cosh(rho) - 1.0);

  // the documented spot check: T1 = T2 = 5, eps = 0.1 gives T - T' ~ 2.5e-3
  const double tp = law_of_cosines_tprime(5.0, 5.0, 0.1, 1.0);
  const double gap = 10.0 - tp;
  CHECK(gap == doctest::Approx(2.5e-3).epsilon(0.01));
  auto [lo, hi] = tprime_bounds(5.0, 5.0, 0.1, cb, b);
  CHECK(lo <= gap);
  CHECK(gap <= hi);
  CHECK(lo <= hi);

  // eps -> 0: both ends vanish (legs must grow to stay admissible)
  auto [lo0, hi0] = tprime_bounds(30.0, 30.0, 1e-6, cb, b);
  CHECK(lo0 <= 1e-11);
  CHECK(hi0 <= 1e-9);

  CHECK_THROWS_AS(tprime_bounds(1.0, 5.0, 0.1, cb, b), HypothesisViolated);
  // tiny b makes the upper bound vacuous: the log argument turns negative
  CHECK_THROWS_AS(tprime_bounds(20.0, 20.0, 0.1, cb, 1e-4), DomainError);
}

TEST_CASE("tprime upper bound scales quadratically at pinching >= 1/2") {
  const CurvatureBounds cb{1.0, 1.0};
  const double b = 2.0 * (std::cosh(1.0) - 1.0);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const int n = 30;
  for (int i = 0; i < n; ++i) {
    const double eps =
        std::exp(std::log(1e-3) + (std::log(1e-2) - std::log(1e-3)) * i / (n - 1));
    const double T = loop_length_lower_bound(eps, 1.0, 1.0) + 1.0;
    auto [lo, hi] = tprime_bounds(T, T, eps, cb, b);
    (void)lo;
    const double lx = std::log(eps), ly = std::log(hi);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  CHECK(slope == doctest::Approx(2.0).epsilon(0.025));
}

TEST_CASE("random admissible triples stay inside the bracket") {
  const CurvatureBounds cb{1.0, 1.0};
  const double rho = 1.0;
  const double b = 2.0 * (std::cosh(rho) - 1.0);
  Rng rng(271);
  for (int i = 0; i < 1000; ++i) {
    const double eps = rng.log_uniform(0.02, 1.2);
    const double tmin = loop_length_lower_bound(eps, 1.0, rho);
    const double T1 = tmin + rng.uniform(0.0, 4.0);
    const double T2 = tmin + rng.uniform(0.0, 4.0);
    auto [lo, hi] = tprime_bounds(T1, T2, eps, cb, b);
    const double gap = T1 + T2 - law_of_cosines_tprime(T1, T2, eps, 1.0);
    CHECK(gap >= lo - 1e-9);
    CHECK(gap <= hi + 1e-9);
  }
}

TEST_CASE("lower quadratic coefficient matches the bound's Taylor limit") {
  for (double b : {0.1, 1.0, 3.0}) {
    const double c1 = tprime_lower_quadratic_coeff(b, 1.0);
    CHECK(c1 > 0.0);
    const CurvatureBounds cb{1.0, 1.0};
    const double eps = 1e-5;
    const double T = loop_length_lower_bound(eps, 1.0, 1.0) + 1.0;
    // use a generous T so the hypothesis holds for this b as well
    auto [lo, hi] = tprime_bounds(T + 20.0, T + 20.0, eps, cb, b);
    (void)hi;
    CHECK(lo / (eps * eps) == doctest::Approx(c1).epsilon(1e-6));
    CHECK(lo >= c1 * eps * eps);  // -log(1-x) >= x
  }
}
