#include "hypflow/orbits.hpp"

#include <algorithm>
#include <cmath>

#include "hypflow/rng.hpp"

namespace hypflow {

CrossedGeodesic synthesize_crossed_geodesic(double T1, double T2, double eps,
                                            CrossingMode mode, CurvatureScale k,
                                            const BoundConstants& bc,
                                            double rotation_sign) {
  if (!(T1 > 0) || !(T2 > 0))
    throw HypothesisViolated("loop lengths must be positive");
  if (!(eps > 0) || eps >= pi)
    throw HypothesisViolated("crossing angle must lie in (0, pi)");

  CrossedGeodesic cg;
  cg.kappa = k;
  cg.v0 = UnitTangent{origin(), half_pi};
  cg.T1 = T1;
  cg.T2 = T2;
  cg.eps = eps;
  cg.mode = mode;
  cg.eps_in_range = eps <= bc.eps0;
  cg.t_in_range = std::min(T1, T2) >= bc.t0;

  const UnitTangent end = geodesic_flow(cg.v0, T1 + T2, k);
  cg.g = isometry_from_frames(cg.v0, end);

  const double alpha =
      (mode == CrossingMode::Partner ? pi - eps : eps) * (rotation_sign < 0 ? -1.0 : 1.0);
  const UnitTangent at_cross = rotate(geodesic_flow(cg.v0, T1, k), alpha);
  cg.g1 = isometry_from_frames(cg.v0, at_cross);
  // identical to g g1^{-1}, but formed from the two frames directly: the
  // triple product would shred the small entries of g2
  cg.g2 = isometry_from_frames(at_cross, end);
  return cg;
}

namespace {

// Conjugates the configuration so that v0 becomes the model frame (i, up).
// All the axis and distance extractions below are conditioned around the
// model basepoint, which matters when v0 sits far out in the half-plane.
CrossedGeodesic standardize(const CrossedGeodesic& cg) {
  const Isometry w = frame_of(cg.v0);
  const Isometry wi = w.inverse();
  CrossedGeodesic s = cg;
  s.v0 = UnitTangent{origin(), half_pi};
  s.g1 = wi * cg.g1 * w;
  s.g = wi * cg.g * w;
  s.g2 = wi * cg.g2 * w;
  return s;
}

// Axis of g extracted in coordinates anchored at the given frame, where the
// matrix is balanced; the global fixed points of a far-from-basepoint axis
// are not recoverable from the raw entries.
GeodesicLine axis_near(const Isometry& g, const UnitTangent& anchor,
                       CurvatureScale k) {
  const Isometry w = frame_of(anchor);
  const GeodesicLine local = axis(w.inverse() * g * w, k);
  return GeodesicLine{w.apply(local.neg), w.apply(local.pos),
                      w.apply(local.base)};
}

}  // namespace

double loop_midpoint_margin(const Isometry& g_loop, const UnitTangent& v_start,
                            double T_loop, double closing_angle,
                            CurvatureScale k) {
  const PointUHP mid = geodesic_flow(v_start, T_loop / 2.0, k).base;
  const double rho_mid = distance(mid, g_loop.apply(mid), k);
  const double rhs = 1.0 + (std::cosh(k.kappa * T_loop) - 1.0) *
                               (1.0 - std::cos(closing_angle)) / 2.0;
  return rhs - std::cosh(k.kappa * rho_mid);
}

namespace {

// Grid over [0, len] with spacing <= step, endpoints included.
int grid_count(double len, double step) {
  return std::max(1, static_cast<int>(std::ceil(len / step))) + 1;
}

}  // namespace

PartnerResult construct_partner(const CrossedGeodesic& cg_in,
                                const BoundConstants& bc, double sample_step) {
  if (cg_in.mode != CrossingMode::Partner)
    throw HypothesisViolated("partner construction needs a partner-mode crossing");
  const CrossedGeodesic cg = standardize(cg_in);
  const CurvatureScale k = cg.kappa;
  const Isometry h = cg.g2.inverse() * cg.g1;

  PartnerResult r;
  r.T = cg.T1 + cg.T2;
  r.eps = cg.eps;
  r.sample_step = sample_step;
  const PointUHP p0 = cg.v0.base;
  const PointUHP p2 = h.apply(p0);
  r.T_hat = distance(p0, p2, k);
  r.T_prime = translation_length(h, k);
  r.strict_shorter = r.T_prime < r.T;

  const GeodesicLine ax = rebase_at_foot(axis_near(h, cg.v0, k), p0, k);

  // Lifted loop segments: the straight lift over [0, T1] and the reversed
  // second loop t -> g2^{-1} c(T - t) over [0, T2].
  const GeodesicSegment seg1{line_of(cg.v0), 0.0, cg.T1};
  const UnitTangent w2 =
      cg.g2.inverse().apply(flip(geodesic_flow(cg.v0, r.T, k)));
  const GeodesicSegment seg2{line_of(w2), 0.0, cg.T2};

  const PointUHP p1 = cg.g1.apply(p0);
  const GeodesicLine c3 = line_of(tangent_toward(p0, p2));
  r.T3 = foot_parameter(c3, p1, k);
  const double split = std::clamp(r.T3, 0.0, r.T_prime);

  const int n = grid_count(r.T_prime, sample_step);
  double sup = 0.0;
  for (int i = 0; i < n; ++i) {
    const double s = r.T_prime * i / (n - 1);
    const PointUHP x = point_on_line(ax, s, k);
    const GeodesicSegment& seg = (s <= split) ? seg1 : seg2;
    sup = std::max(sup, distance_to_segment(x, seg, k));
  }
  r.dist_sup = sup;

  r.bound_len = bc.partner_len_coeff * cg.eps;
  r.bound_dist = bc.partner_dist_coeff * cg.eps;
  r.len_margin = r.bound_len - (r.T - r.T_prime);
  r.dist_margin = r.bound_dist - r.dist_sup;
  r.that_margin = 2.0 * a_theta(cg.eps / 2.0, k.kappa) - (r.T - r.T_hat);

  // Both loops close at angle eps in partner mode.
  r.midpoint_margin1 = loop_midpoint_margin(cg.g1, cg.v0, cg.T1, cg.eps, k);
  r.midpoint_margin2 = loop_midpoint_margin(
      cg.g2, geodesic_flow(cg.v0, cg.T1, k), cg.T2, cg.eps, k);
  return r;
}

PseudoPartnerResult construct_pseudo_partner(const CrossedGeodesic& cg_in,
                                             const BoundConstants& bc,
                                             double sample_step) {
  if (cg_in.mode != CrossingMode::Pseudo)
    throw HypothesisViolated("pseudo construction needs a pseudo-mode crossing");
  const CrossedGeodesic cg = standardize(cg_in);
  const CurvatureScale k = cg.kappa;

  PseudoPartnerResult r;
  r.T1 = cg.T1;
  r.T2 = cg.T2;
  r.eps = cg.eps;
  r.sample_step = sample_step;
  r.That1 = translation_length(cg.g1, k);
  r.That2 = translation_length(cg.g2, k);

  const PointUHP p0 = cg.v0.base;
  const PointUHP p1 = cg.g1.apply(p0);
  const UnitTangent at_p1 = geodesic_flow(cg.v0, cg.T1, k);
  const GeodesicLine ax1 = rebase_at_foot(axis_near(cg.g1, cg.v0, k), p0, k);
  const GeodesicLine ax2 = rebase_at_foot(axis_near(cg.g2, at_p1, k), p1, k);

  double sup1 = 0.0;
  const int n1 = grid_count(cg.T1, sample_step);
  for (int i = 0; i < n1; ++i) {
    const double s = cg.T1 * i / (n1 - 1);
    sup1 = std::max(sup1, distance(point_on_line(ax1, s, k),
                                   geodesic_flow(cg.v0, s, k).base, k));
  }
  double sup2 = 0.0;
  const int n2 = grid_count(cg.T2, sample_step);
  for (int i = 0; i < n2; ++i) {
    const double s = cg.T2 * i / (n2 - 1);
    sup2 = std::max(sup2, distance(point_on_line(ax2, s, k),
                                   geodesic_flow(cg.v0, cg.T1 + s, k).base, k));
  }
  r.dist_sup1 = sup1;
  r.dist_sup2 = sup2;
  r.endpoint_gap = distance(point_on_line(ax1, r.That1, k),
                            point_on_line(ax2, 0.0, k), k);

  r.bound_len = bc.pseudo_len_coeff * cg.eps;
  r.bound_dist = bc.pseudo_dist_coeff * cg.eps;
  r.bound_gap = bc.pseudo_gap_coeff * cg.eps;
  r.len_margin = r.bound_len - std::max(cg.T1 - r.That1, cg.T2 - r.That2);
  r.dist_margin = r.bound_dist - std::max(sup1, sup2);
  r.gap_margin = r.bound_gap - r.endpoint_gap;
  r.nonneg_margin = std::min(cg.T1 - r.That1, cg.T2 - r.That2);

  // Both loops of a pseudo-mode crossing close at angle pi - eps.
  r.midpoint_margin1 =
      loop_midpoint_margin(cg.g1, cg.v0, cg.T1, pi - cg.eps, k);
  r.midpoint_margin2 = loop_midpoint_margin(
      cg.g2, geodesic_flow(cg.v0, cg.T1, k), cg.T2, pi - cg.eps, k);
  return r;
}

RecurrentVector synthesize_recurrent(const Isometry& g, double offset,
                                     double tilt, double T, CurvatureScale k,
                                     double delta_max) {
  const GeodesicLine ax = axis(g, k);
  UnitTangent w = ax.base;
  if (offset != 0.0) {
    const UnitTangent n = rotate(ax.base, half_pi);
    const Isometry push = isometry_from_frames(n, geodesic_flow(n, offset, k));
    w = push.apply(ax.base);
  }
  w = rotate(w, tilt);
  const double delta = d1_metric(g.apply(w), geodesic_flow(w, T, k), k);
  if (delta > delta_max)
    throw DeltaTooLarge("recurrence defect " + format_double(delta) +
                        " exceeds " + format_double(delta_max));
  return RecurrentVector{w, delta};
}

LoopRecurrent synthesize_loop_recurrent(const Isometry& g, double offset,
                                        CurvatureScale k) {
  const GeodesicLine ax = axis(g, k);
  PointUHP q = ax.base.base;
  if (offset != 0.0) {
    const UnitTangent n = rotate(ax.base, half_pi);
    q = geodesic_flow(n, offset, k).base;
  }
  const PointUHP gq = g.apply(q);
  LoopRecurrent r;
  r.w = tangent_toward(q, gq);
  r.T = distance(q, gq, k);
  r.delta = d1_metric(g.apply(r.w), geodesic_flow(r.w, r.T, k), k);
  return r;
}

ClosingResult close_orbit(const UnitTangent& w, double T, const Isometry& g,
                          const BoundConstants& bc, CurvatureScale k,
                          double sample_step) {
  ClosingResult r;
  r.T = T;
  r.sample_step = sample_step;
  r.delta = d1_metric(g.apply(w), geodesic_flow(w, T, k), k);
  if (r.delta > bc.delta0 * (1.0 + 1e-12))
    throw HypothesisViolated("recurrence defect exceeds delta0");
  if (T < bc.t0)
    throw HypothesisViolated("period below the configured t0");
  r.T_prime = translation_length(g, k);

  const GeodesicLine ax = rebase_at_foot(axis_near(g, w, k), w.base, k);
  const UnitTangent u = ax.base;
  const int n = grid_count(T, sample_step);
  double sup = 0.0;
  for (int i = 0; i < n; ++i) {
    const double s = T * i / (n - 1);
    sup = std::max(sup, d1_metric(geodesic_flow(w, s, k),
                                  geodesic_flow(u, s, k), k));
  }
  r.shadow_sup = sup;

  r.bound_len = 2.0 * bc.C_main * r.delta;
  r.bound_shadow = (5.0 * bc.C_main + 1.0) * r.delta;
  r.len_margin = r.bound_len - std::fabs(T - r.T_prime);
  r.shadow_margin = r.bound_shadow - r.shadow_sup;

  r.foot_case =
      distance(g.apply(w.base), geodesic_flow(w, T, k).base, k) <= 1e-9;
  if (r.foot_case) {
    r.foot_bound_len = 4.0 * bc.C_tilde * r.delta;
    r.foot_bound_shadow = (10.0 * bc.C_tilde + 1.0) * r.delta;
    r.foot_len_margin = r.foot_bound_len - (T - r.T_prime);
    r.foot_shadow_margin = r.foot_bound_shadow - r.shadow_sup;
    // strict shortening holds for genuine loops; an exactly closed orbit
    // (delta = 0, base on the axis) sits at T = T' and is not a defect
    r.foot_strict = T - r.T_prime > 0.0 || r.delta <= 1e-12;
  }
  return r;
}

bool in_A_theta(const UnitTangent& v, const UnitTangent& v0, double theta,
                CurvatureScale k) {
  if (theta < 0 || theta >= half_pi) throw DomainError("theta outside [0, pi/2)");
  const PointUHP p0 = v0.base;
  if (distance(v.base, p0, k) > a_theta(theta, k.kappa)) return false;
  auto [vm, vp] = endpoints(v);
  auto [v0m, v0p] = endpoints(v0);
  auto angle = [&](const BoundaryPoint& a, const BoundaryPoint& b) {
    return same_boundary_point(a, b) ? 0.0 : visibility_angle(p0, a, b);
  };
  return angle(vm, v0m) <= theta && angle(vp, v0p) <= theta;
}

CheckReport check_cone_contraction(const Isometry& g, const UnitTangent& v0,
                                   double theta, double t, int n_samples,
                                   const BoundConstants& bc, CurvatureScale k,
                                   std::uint64_t seed, double tolerance) {
  // Exhibit a witness v in A_theta(v0) with g^{-1}_* phi^t v in A_theta(v0);
  // the slack absorbs roundoff for witnesses constructed on the cone edge.
  const double theta_w = theta * (1.0 + 1e-9) + 1e-15;
  auto admissible = [&](const UnitTangent& v) {
    return in_A_theta(v, v0, theta_w, k) &&
           in_A_theta(g.inverse().apply(geodesic_flow(v, t, k)), v0, theta_w, k);
  };
  bool found = admissible(v0);
  if (!found) {
    const PointUHP p0 = v0.base;
    const PointUHP gp0 = g.apply(p0);
    if (distance(p0, gp0, k) > 1e-12)
      found = admissible(tangent_toward(p0, gp0));
  }
  if (!found)
    throw NoWitness("no witness for Gamma_theta membership at the given t");

  const double rho = bc.rho_of(theta);
  const PointUHP p0 = v0.base;
  auto [v0m, v0p] = endpoints(v0);
  const Isometry ginv = g.inverse();

  CheckReport rep;
  rep.name = "cone-contraction";
  rep.tolerance = tolerance;
  Rng rng(seed);
  for (int i = 0; i < n_samples; ++i) {
    // extremes first, then random interior directions
    const double u = (i == 0) ? -1.0 : (i == 1) ? 1.0 : (i == 2) ? 0.0
                                                       : rng.uniform(-1.0, 1.0);
    const BoundaryPoint eta_f =
        endpoints(UnitTangent{p0, wrap_angle(v0.dir + u * rho)}).second;
    const BoundaryPoint g_eta = g.apply(eta_f);
    const double ang_f = same_boundary_point(g_eta, v0p)
                             ? 0.0
                             : visibility_angle(p0, v0p, g_eta);
    rep.absorb(rho - ang_f);

    const BoundaryPoint eta_p =
        endpoints(UnitTangent{p0, wrap_angle(v0.dir + pi + u * rho)}).second;
    const BoundaryPoint gi_eta = ginv.apply(eta_p);
    const double ang_p = same_boundary_point(gi_eta, v0m)
                             ? 0.0
                             : visibility_angle(p0, v0m, gi_eta);
    rep.absorb(rho - ang_p);
  }
  return rep;
}

}  // namespace hypflow
