#include "doctest.h"

#include <cmath>

#include "hypflow/orbits.hpp"
#include "hypflow/rng.hpp"

using namespace hypflow;

namespace {

const CurvatureScale K1{1.0};
const BoundConstants BC = make_constants({1.0, 1.0}, 5.0, 0.025);

}  // namespace

TEST_CASE("synthesis realizes the prescribed crossing data") {
  for (CrossingMode mode : {CrossingMode::Partner, CrossingMode::Pseudo}) {
    const auto cg = synthesize_crossed_geodesic(6.0, 6.0, 0.05, mode, K1, BC);
    CHECK(approx_equal(cg.g, cg.g2 * cg.g1, 1e-10));
    CHECK(translation_length(cg.g, K1) == doctest::Approx(12.0).epsilon(1e-9));

    // crossing angle at p1 between (g1)_* v0 and the lift direction
    const UnitTangent pushed = cg.g1.apply(cg.v0);
    const UnitTangent along = geodesic_flow(cg.v0, cg.T1, K1);
    CHECK(distance(pushed.base, along.base, K1) <= 1e-12);
    const double to_forward = angle_between_directions(pushed.dir, along.dir);
    if (mode == CrossingMode::Partner)
      CHECK(pi - to_forward == doctest::Approx(0.05).epsilon(1e-9));
    else
      CHECK(to_forward == doctest::Approx(0.05).epsilon(1e-9));
  }

  CHECK_THROWS_AS(
      synthesize_crossed_geodesic(0.0, 5.0, 0.1, CrossingMode::Partner, K1, BC),
      HypothesisViolated);
  CHECK_THROWS_AS(
      synthesize_crossed_geodesic(5.0, 5.0, 0.0, CrossingMode::Partner, K1, BC),
      HypothesisViolated);
  CHECK(synthesize_crossed_geodesic(5.0, 5.0, 0.2, CrossingMode::Partner, K1, BC)
            .eps_in_range == false);
}

TEST_CASE("partner construction: bounds, trace oracle, monotone sweep") {
  const auto cg =
      synthesize_crossed_geodesic(10.0, 10.0, 0.05, CrossingMode::Partner, K1, BC);
  const PartnerResult r = construct_partner(cg, BC);
  CHECK(r.passed());
  CHECK(r.T - r.T_prime <= 34.0 * 0.05);
  CHECK(r.dist_sup <= 49.0 * 0.05);
  CHECK(r.T_prime < r.T);
  CHECK(r.that_margin >= 0.0);
  CHECK(r.midpoint_margin1 >= -1e-9);
  CHECK(r.midpoint_margin2 >= -1e-9);

  // trace identity as an independent oracle for T'
  const Isometry h = cg.g2.inverse() * cg.g1;
  CHECK(r.T_prime ==
        doctest::Approx(2.0 * std::acosh(std::fabs(h.trace()) / 2.0))
            .epsilon(1e-12));

  // monotone decay of the action difference along an eps sweep
  double prev = 1e300;
  for (double eps : {0.05, 0.02, 0.008, 0.003, 0.001}) {
    const auto c = synthesize_crossed_geodesic(10.0, 10.0, eps,
                                               CrossingMode::Partner, K1, BC);
    const PartnerResult rr = construct_partner(c, BC);
    CHECK(rr.T - rr.T_prime < prev);
    prev = rr.T - rr.T_prime;
    CHECK(rr.that_margin >= 0.0);  // T - T_hat <= 2 a(eps/2) on every run
  }
}

TEST_CASE("partner: length bracket for Gamma_theta witnesses") {
  // t - (4/k1)(2 k2/k1 + 3) theta <= |gamma| <= t + (4/k1) theta at theta = 2 eps
  Rng rng(23);
  for (int i = 0; i < 20; ++i) {
    const double eps = rng.log_uniform(1e-3, BC.eps0);
    const double T1 = rng.uniform(6.0, 12.0), T2 = rng.uniform(6.0, 12.0);
    const auto cg =
        synthesize_crossed_geodesic(T1, T2, eps, CrossingMode::Partner, K1, BC);
    const Isometry h = cg.g2.inverse() * cg.g1;
    const double theta = 2.0 * eps;
    const double t = distance(cg.v0.base, h.apply(cg.v0.base), K1);
    const double len = translation_length(h, K1);
    CHECK(len >= t - 4.0 * 5.0 * theta - 1e-9);
    CHECK(len <= t + 4.0 * theta + 1e-9);
    // foot-point variant (improved): 0 <= t - |gamma| <= (8/k1)(k2/k1+1) theta
    CHECK(t - len >= -1e-9);
    CHECK(t - len <= 16.0 * theta + 1e-9);
  }
}

TEST_CASE("pseudo-partner: exact closure at eps -> 0 and linear scaling") {
  const auto cg =
      synthesize_crossed_geodesic(10.0, 10.0, 0.05, CrossingMode::Pseudo, K1, BC);
  const PseudoPartnerResult r = construct_pseudo_partner(cg, BC);
  CHECK(r.passed());
  CHECK(r.T1 - r.That1 <= 16.0 * 0.05);
  CHECK(r.T2 - r.That2 <= 16.0 * 0.05);
  CHECK(r.endpoint_gap <= 64.0 * 0.05);
  CHECK(r.nonneg_margin >= -1e-12);
  CHECK(r.midpoint_margin1 >= -1e-9);
  CHECK(r.midpoint_margin2 >= -1e-9);

  // tiny eps: the axes of g1, g2 all but coincide with the lifts (the
  // fixed-point conditioning floors the achievable agreement around 1e-7)
  const auto cg0 = synthesize_crossed_geodesic(10.0, 10.0, 1e-5,
                                               CrossingMode::Pseudo, K1, BC);
  const PseudoPartnerResult r0 = construct_pseudo_partner(cg0, BC);
  CHECK(r0.T1 - r0.That1 <= 1e-7);
  CHECK(r0.dist_sup1 <= 1e-4);
  CHECK(r0.endpoint_gap <= 1e-3);

  // log-log slope of the gaps is at least 1 - 0.1
  double lx0 = 0, ly0 = 0, lx1 = 0, ly1 = 0;
  {
    const auto lo = construct_pseudo_partner(
        synthesize_crossed_geodesic(10, 10, 1e-3, CrossingMode::Pseudo, K1, BC), BC);
    const auto hi = construct_pseudo_partner(
        synthesize_crossed_geodesic(10, 10, BC.eps0, CrossingMode::Pseudo, K1, BC),
        BC);
    lx0 = std::log(1e-3);
    ly0 = std::log(lo.endpoint_gap);
    lx1 = std::log(BC.eps0);
    ly1 = std::log(hi.endpoint_gap);
  }
  CHECK((ly1 - ly0) / (lx1 - lx0) >= 0.9);
}

TEST_CASE("recurrent synthesis and orbit closing") {
  const double L = 10.0;
  const double h = std::exp(L / 2.0);
  const Isometry g = Isometry::from_entries(h, 0, 0, 1 / h);

  // on the axis with T = |g|: the defect vanishes and closing is exact
  const RecurrentVector exact = synthesize_recurrent(g, 0.0, 0.0, L, K1);
  CHECK(exact.delta <= 1e-12);
  const ClosingResult c0 = close_orbit(exact.w, L, g, BC, K1);
  CHECK(c0.delta <= 1e-12);
  CHECK(std::fabs(c0.T - c0.T_prime) <= 1e-12);
  CHECK(c0.shadow_sup <= 1e-9);
  CHECK(c0.passed());

  // the defect grows with the offset (aimed tilt keeps it admissible)
  double prev = 0.0;
  for (double off : {0.002, 0.004, 0.008}) {
    const GeodesicLine ax = axis(g, K1);
    const UnitTangent n = rotate(ax.base, half_pi);
    const UnitTangent w0 =
        isometry_from_frames(n, geodesic_flow(n, off, K1)).apply(ax.base);
    const double aim =
        wrap_angle(direction_to_boundary(w0.base, ax.pos) - w0.dir + pi) - pi;
    const RecurrentVector rv = synthesize_recurrent(g, off, aim, L, K1);
    CHECK(rv.delta > prev);
    prev = rv.delta;
    const ClosingResult c = close_orbit(rv.w, L, g, BC, K1);
    CHECK(c.passed());
  }

  // jitter shows up in the defect and in T - T'
  const RecurrentVector jit = synthesize_recurrent(g, 0.0, 0.0, L + 0.005, K1);
  CHECK(jit.delta == doctest::Approx(0.005).epsilon(1e-6));
  const ClosingResult cj = close_orbit(jit.w, L + 0.005, g, BC, K1);
  CHECK(cj.len_margin >= 0.0);

  CHECK_THROWS_AS(synthesize_recurrent(g, 0.3, 0.0, L, K1, BC.delta0),
                  DeltaTooLarge);
  CHECK_THROWS_AS(close_orbit(exact.w, 2.0, g, BC, K1), HypothesisViolated);
}

TEST_CASE("loop recurrence hits the foot-point case exactly") {
  Rng rng(31);
  for (int i = 0; i < 10; ++i) {
    const double L = rng.uniform(8.0, 12.0);
    const double h = std::exp(L / 2.0);
    const UnitTangent a{origin(), half_pi},
        b{PointUHP{rng.uniform(-1, 1), rng.uniform(0.8, 1.3)},
          rng.uniform(0.0, two_pi)};
    const Isometry conj = isometry_from_frames(a, b);
    const Isometry g = conj * Isometry::from_entries(h, 0, 0, 1 / h) * conj.inverse();

    const LoopRecurrent lr = synthesize_loop_recurrent(g, rng.uniform(0.001, 0.008), K1);
    CHECK(lr.delta <= BC.delta0);
    const ClosingResult c = close_orbit(lr.w, lr.T, g, BC, K1);
    CHECK(c.foot_case);
    CHECK(c.foot_strict);  // 0 < T - T'
    CHECK(c.passed());
    CHECK(c.T - c.T_prime <= 4.0 * BC.C_tilde * c.delta);
    CHECK(c.shadow_sup <= (10.0 * BC.C_tilde + 1.0) * c.delta);
  }
}

TEST_CASE("A_theta membership") {
  const UnitTangent v0{origin(), half_pi};
  CHECK(in_A_theta(v0, v0, 0.0, K1));
  CHECK(in_A_theta(v0, v0, 0.3, K1));

  // flowing along the geodesic keeps the endpoints but moves the footpoint
  const double theta = 0.2;
  const double a = a_theta(theta, 1.0);
  CHECK(in_A_theta(geodesic_flow(v0, a * 0.999, K1), v0, theta, K1));
  CHECK(!in_A_theta(geodesic_flow(v0, a * 1.01, K1), v0, theta, K1));

  // a rotated vector at p0 fails once the angle exceeds theta
  CHECK(in_A_theta(rotate(v0, 0.19), v0, theta, K1));
  CHECK(!in_A_theta(rotate(v0, 0.21), v0, theta, K1));
}

TEST_CASE("cone contraction") {
  const UnitTangent v0{origin(), half_pi};

  // axial case: translation along the geodesic of v0
  const double h = std::exp(3.0);
  const Isometry g = Isometry::from_entries(h, 0, 0, 1 / h);
  const CheckReport axial =
      check_cone_contraction(g, v0, 0.15, 6.0, 200, BC, K1, 99);
  CHECK(axial.violations == 0);

  // theta = 0: the degenerate cones are the fixed endpoints
  const CheckReport degenerate =
      check_cone_contraction(g, v0, 0.0, 6.0, 5, BC, K1, 99);
  CHECK(degenerate.violations == 0);

  // partner element with theta = 2 eps, t = T_hat
  const double eps = 0.04;
  const auto cg =
      synthesize_crossed_geodesic(8.0, 9.0, eps, CrossingMode::Partner, K1, BC);
  const Isometry hel = cg.g2.inverse() * cg.g1;
  const double t = distance(cg.v0.base, hel.apply(cg.v0.base), K1);
  const CheckReport rep =
      check_cone_contraction(hel, cg.v0, 2.0 * eps, t, 500, BC, K1, 7);
  CHECK(rep.violations == 0);
  CHECK(rep.worst_margin >= 0.0);

  // no witness at an absurd t
  CHECK_THROWS_AS(check_cone_contraction(g, v0, 0.1, 50.0, 10, BC, K1, 1),
                  NoWitness);
}
