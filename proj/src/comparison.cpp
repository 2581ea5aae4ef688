#include "hypflow/comparison.hpp"

#include <algorithm>
#include <cmath>

namespace hypflow {

void validate_triangle(const TriangleSample& t) {
  if (!(t.l1 > 0) || !(t.l2 > 0) || !(t.l3 > 0))
    throw InvalidTriangle("sides must be positive");
  if (t.l3 > t.l1 + t.l2 + 1e-12 || t.l1 > t.l2 + t.l3 + 1e-12 ||
      t.l2 > t.l1 + t.l3 + 1e-12)
    throw InvalidTriangle("triangle inequality fails");
  const double angles[] = {t.a1, t.a2, t.a3};
  for (double a : angles)
    if (!(a > 0) || !(a < pi)) throw InvalidTriangle("angles must lie in (0, pi)");
  if (t.a1 + t.a2 + t.a3 >= pi)
    throw InvalidTriangle("angle sum must be below pi in negative curvature");
}

double solve_side_constant(double l1, double l2, double a3, double kappa) {
  if (!(l1 > 0) || !(l2 > 0)) throw DomainError("sides must be positive");
  if (a3 < 0 || a3 > pi) throw DomainError("angle must lie in [0, pi]");
  const double rhs = std::cosh(kappa * l1) * std::cosh(kappa * l2) -
                     std::sinh(kappa * l1) * std::sinh(kappa * l2) * std::cos(a3);
  return std::acosh(std::max(1.0, rhs)) / kappa;
}

double solve_angle_constant(double l1, double l2, double l3, double kappa) {
  const double num = std::cosh(kappa * l1) * std::cosh(kappa * l2) -
                     std::cosh(kappa * l3);
  const double den = std::sinh(kappa * l1) * std::sinh(kappa * l2);
  return std::acos(std::clamp(num / den, -1.0, 1.0));
}

TriangleMargins triangle_law_margins(const TriangleSample& t, CurvatureBounds cb,
                                     double right_angle_tol) {
  validate_triangle(t);
  const double k1 = cb.kappa1, k2 = cb.kappa2;
  TriangleMargins m;

  const double rhs1 = std::cosh(k1 * t.l1) * std::cosh(k1 * t.l2) -
                      std::sinh(k1 * t.l1) * std::sinh(k1 * t.l2) * std::cos(t.a3);
  m.lawcosh_k1 = t.l3 - std::acosh(std::max(1.0, rhs1)) / k1;

  const double rhs2 = std::cosh(k2 * t.l1) * std::cosh(k2 * t.l2) -
                      std::sinh(k2 * t.l1) * std::sinh(k2 * t.l2) * std::cos(t.a3);
  m.lawcosh_k2 = std::acosh(std::max(1.0, rhs2)) / k2 - t.l3;

  const double s3 = std::sin(t.a3 / 2.0);
  m.angle_chain_lo = 2.0 * s3 * s3 - 2.0 * t.a3 * t.a3 / (pi * pi);
  m.angle_chain_hi = (std::cosh(k1 * t.l3) - 1.0) /
                         (std::sinh(k1 * t.l1) * std::sinh(k1 * t.l2)) -
                     2.0 * s3 * s3;

  m.right_angle = std::fabs(t.a3 - half_pi) <= right_angle_tol;
  if (m.right_angle) {
    const double sh3_1 = std::sinh(k1 * t.l3);
    const double sh3_2 = std::sinh(k2 * t.l3);
    const double sa[2] = {std::sin(t.a1), std::sin(t.a2)};
    const double li[2] = {t.l1, t.l2};
    for (int i = 0; i < 2; ++i) {
      m.lawsin_k1[i] = std::sinh(k1 * li[i]) / sh3_1 - sa[i];
      m.lawsin_k2[i] = sa[i] - std::sinh(k2 * li[i]) / sh3_2;
    }
    m.cosh_bound = std::acosh(1.0 / std::sin(t.a2)) / k1 - t.l1;
    m.sin_bound = std::cos(t.a2) / std::sin(t.a2) / sh3_1 - std::sin(t.a1);
  }
  return m;
}

std::vector<CheckReport> check_triangle_laws(const std::vector<TriangleSample>& ts,
                                             CurvatureBounds cb,
                                             double tolerance) {
  std::vector<CheckReport> reps(8);
  const char* names[] = {"lawcosh-k1",     "lawcosh-k2", "angle-chain-lo",
                         "angle-chain-hi", "lawsin-k1",  "lawsin-k2",
                         "cosh-bound",     "sin-bound"};
  for (int i = 0; i < 8; ++i) {
    reps[i].name = names[i];
    reps[i].tolerance = tolerance;
  }
  for (const auto& t : ts) {
    const TriangleMargins m = triangle_law_margins(t, cb);
    reps[0].absorb(m.lawcosh_k1);
    reps[1].absorb(m.lawcosh_k2);
    reps[2].absorb(m.angle_chain_lo);
    reps[3].absorb(m.angle_chain_hi);
    if (m.right_angle) {
      reps[4].absorb(m.lawsin_k1[0]);
      reps[4].absorb(m.lawsin_k1[1]);
      reps[5].absorb(m.lawsin_k2[0]);
      reps[5].absorb(m.lawsin_k2[1]);
      reps[6].absorb(m.cosh_bound);
      reps[7].absorb(m.sin_bound);
    }
  }
  return reps;
}

CorollaryMargins corollary_margins(const CorollaryMeasurement& m, double eps,
                                   double R1, double R2, double kappa1) {
  if (!(eps > 0) || eps >= half_pi)
    throw HypothesisViolated("corollary needs eps in (0, pi/2)");
  if (m.a3 < pi - eps - 1e-9 || m.a3 > pi + 1e-12)
    throw HypothesisViolated("corollary needs a3 in [pi - eps, pi]");
  if (m.l1 < R1 - 1e-12 || m.l2 < R2 - 1e-12)
    throw HypothesisViolated("corollary needs l_i >= R_i");
  const double a_half = a_theta(eps / 2.0, kappa1);
  CorollaryMargins r;
  r.dist_to_c3 = a_half - m.max_side_dist;
  r.side_sum = m.l3 - (R1 + R2 - 2.0 * a_half);
  r.sin1 = std::tan(eps) / std::sinh(kappa1 * R2) - std::sin(m.a1);
  r.sin2 = std::tan(eps) / std::sinh(kappa1 * R1) - std::sin(m.a2);
  return r;
}

CorollaryMeasurement build_corollary_uhp(double a3, double l1, double l2,
                                         CurvatureScale k, int side_samples) {
  const PointUHP p3 = origin();
  const UnitTangent to_p2{p3, wrap_angle(half_pi + a3 / 2.0)};
  const UnitTangent to_p1{p3, wrap_angle(half_pi - a3 / 2.0)};
  const PointUHP p2 = geodesic_flow(to_p2, l1, k).base;
  const PointUHP p1 = geodesic_flow(to_p1, l2, k).base;

  CorollaryMeasurement m;
  m.l1 = l1;
  m.l2 = l2;
  m.l3 = distance(p1, p2, k);
  m.a3 = a3;
  m.a1 = angle_between_directions(direction_toward(p1, p2),
                                  direction_toward(p1, p3));
  m.a2 = angle_between_directions(direction_toward(p2, p1),
                                  direction_toward(p2, p3));

  const GeodesicSegment c3 = segment_between(p1, p2, k);
  double worst = 0.0;
  for (int i = 0; i <= side_samples; ++i) {
    const double u = static_cast<double>(i) / side_samples;
    const PointUHP q1 = geodesic_flow(to_p2, u * l1, k).base;
    const PointUHP q2 = geodesic_flow(to_p1, u * l2, k).base;
    worst = std::max({worst, distance_to_segment(q1, c3, k),
                      distance_to_segment(q2, c3, k)});
  }
  m.max_side_dist = worst;
  return m;
}

double perp_proj_margin(const PerpProjSample& s, double kappa2) {
  const double k = kappa2;
  const double sh_dt = std::sinh(k * s.dt / 2.0);
  const double sh_dr = std::sinh(k * std::fabs(s.r2 - s.r1) / 2.0);
  const double rhs = std::cosh(k * s.r1) * std::cosh(k * s.r2) * sh_dt * sh_dt +
                     sh_dr * sh_dr;
  const double d_bound = 2.0 * std::asinh(std::sqrt(rhs)) / k;
  return d_bound - s.d12;
}

PerpProjSample build_perp_proj_uhp(double r1, double r2, double t1, double t2,
                                   CurvatureScale k) {
  if (r1 < 0 || r2 < 0) throw DomainError("perpendicular distances must be >= 0");
  auto off_axis = [&](double t, double r) {
    const UnitTangent at{PointUHP{0.0, std::exp(k.kappa * t)}, 0.0};
    return geodesic_flow(at, r, k).base;  // direction 0 leaves the axis to +x
  };
  const PointUHP x1 = off_axis(t1, r1);
  const PointUHP x2 = off_axis(t2, r2);
  // the half-planes bounded by the axis are convex, so the connecting
  // segment crosses the axis exactly when the endpoints straddle it
  if ((x1.x > 0) != (x2.x > 0) && x1.x != 0.0 && x2.x != 0.0)
    throw SideCrossing("connecting segment crosses the base geodesic");
  return PerpProjSample{r1, r2, std::fabs(t2 - t1), distance(x1, x2, k)};
}

AnglesAtInfinityMargins check_angles_at_infinity(const UnitTangent& v,
                                                 const UnitTangent& w,
                                                 double delta,
                                                 CurvatureBounds cb,
                                                 CurvatureScale k) {
  if (!(delta > 0) || delta > 0.5)
    throw HypothesisViolated("angles-at-infinity needs delta in (0, 1/2]");
  const double d1 = d1_metric(v, w, k);
  if (d1 > delta * (1.0 + 1e-12))
    throw HypothesisViolated("d1(v, w) exceeds delta");

  const PointUHP p = w.base;
  auto [vm, vp] = endpoints(v);
  auto [wm, wp] = endpoints(w);
  auto angle = [&](const BoundaryPoint& a, const BoundaryPoint& b) {
    return same_boundary_point(a, b) ? 0.0 : visibility_angle(p, a, b);
  };
  const double fwd = angle(vp, wp);
  const double bwd = angle(vm, wm);
  const double fd = f_delta(delta, cb.kappa1);
  return AnglesAtInfinityMargins{fd - fwd, fd - bwd,
                                 two_pi * delta - std::max(fwd, bwd)};
}

}  // namespace hypflow
