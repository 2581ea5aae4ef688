#include "hypflow/surface.hpp"

#include <algorithm>
#include <cmath>

#include "hypflow/rng.hpp"

namespace hypflow {

double CurvatureProfile::curvature(double r) const {
  const double k1s = kappa1 * kappa1, k2s = kappa2 * kappa2;
  if (r <= r_lo) return -k2s;
  if (r >= r_hi) return -k1s;
  const double u = (r - r_lo) / (r_hi - r_lo);
  const double s = u * u * u * (u * (6.0 * u - 15.0) + 10.0);  // C^2 smoothstep
  return -k2s + (k2s - k1s) * s;
}

WarpTable::WarpTable(CurvatureProfile profile, double step, double r_max)
    : profile_(profile), step_(step), r_max_(r_max) {
  const int n = static_cast<int>(std::ceil(r_max / step)) + 1;
  r_max_ = (n - 1) * step;
  f_.resize(n);
  fp_.resize(n);
  f_[0] = 0.0;
  fp_[0] = 1.0;
  // RK4 on (f, f')' = (f', -K(r) f)
  for (int i = 0; i + 1 < n; ++i) {
    const double r = i * step;
    const double f0 = f_[i], p0 = fp_[i];
    const double K0 = profile_.curvature(r);
    const double Kh = profile_.curvature(r + step / 2.0);
    const double K1 = profile_.curvature(r + step);
    const double k1f = p0, k1p = -K0 * f0;
    const double k2f = p0 + step / 2.0 * k1p, k2p = -Kh * (f0 + step / 2.0 * k1f);
    const double k3f = p0 + step / 2.0 * k2p, k3p = -Kh * (f0 + step / 2.0 * k2f);
    const double k4f = p0 + step * k3p, k4p = -K1 * (f0 + step * k3f);
    f_[i + 1] = f0 + step / 6.0 * (k1f + 2.0 * k2f + 2.0 * k3f + k4f);
    fp_[i + 1] = p0 + step / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
  }
}

namespace {

// Cubic Hermite for y on [r_k, r_k + h] from node values and derivatives.
inline double hermite(double u, double h, double y0, double y1, double m0,
                      double m1) {
  const double u2 = u * u, u3 = u2 * u;
  return (2.0 * u3 - 3.0 * u2 + 1.0) * y0 + (u3 - 2.0 * u2 + u) * h * m0 +
         (-2.0 * u3 + 3.0 * u2) * y1 + (u3 - u2) * h * m1;
}

}  // namespace

double WarpTable::warp(double r) const {
  if (r < 0.0) r = 0.0;
  if (r >= r_max_) throw OutOfTable("warp(r) beyond the tabulated range");
  const double pos = r / step_;
  const int i = std::min(static_cast<int>(pos), static_cast<int>(f_.size()) - 2);
  const double u = pos - i;
  return hermite(u, step_, f_[i], f_[i + 1], fp_[i], fp_[i + 1]);
}

double WarpTable::warp_deriv(double r) const {
  if (r < 0.0) r = 0.0;
  if (r >= r_max_) throw OutOfTable("warp'(r) beyond the tabulated range");
  const double pos = r / step_;
  const int i = std::min(static_cast<int>(pos), static_cast<int>(f_.size()) - 2);
  const double u = pos - i;
  const double m0 = -profile_.curvature(i * step_) * f_[i];
  const double m1 = -profile_.curvature((i + 1) * step_) * f_[i + 1];
  return hermite(u, step_, fp_[i], fp_[i + 1], m0, m1);
}

CurvatureBounds WarpTable::extracted_bounds() const {
  double kmin = 0.0, kmax = -1e300;
  for (std::size_t i = 0; i < f_.size(); ++i) {
    const double K = profile_.curvature(i * step_);
    kmin = std::min(kmin, K);
    kmax = std::max(kmax, K);
  }
  return CurvatureBounds{std::sqrt(-kmax), std::sqrt(-kmin)};
}

WarpTable build_surface(const CurvatureProfile& p, double step, double r_max) {
  if (!(p.kappa1 > 0) || p.kappa2 < p.kappa1 || !(p.r_lo >= 0) ||
      !(p.r_hi > p.r_lo))
    throw ProfileOutOfRange("bad curvature profile parameters");
  if (step > 1e-3 * std::min(1.0, 1.0 / p.kappa2))
    throw DomainError("warp step must be <= 1e-3 min(1, 1/kappa2)");

  WarpTable w(p, step, r_max);

  const double k1s = p.kappa1 * p.kappa1, k2s = p.kappa2 * p.kappa2;
  const int n = static_cast<int>(std::round(w.r_max() / step));
  for (int i = 0; i <= n; ++i) {
    const double r = i * step;
    const double K = p.curvature(r);
    if (K < -k2s - 1e-12 || K > -k1s + 1e-12)
      throw ProfileOutOfRange("profile exits the pinching band");
    if (r == 0.0 || r >= w.r_max()) continue;
    const double f = w.warp(r);
    const double lo = std::sinh(p.kappa1 * r) / p.kappa1;
    const double hi = std::sinh(p.kappa2 * r) / p.kappa2;
    if (f < lo * (1.0 - 1e-7) - 1e-12 || f > hi * (1.0 + 1e-7) + 1e-12)
      throw ProfileOutOfRange("warp violates the Jacobi comparison bracket");
  }
  return w;
}

namespace {

struct GeoState {
  double r, theta, pr;  // pr = dr/dt; f^2 dtheta/dt = h held exactly
};

inline void geo_rhs(const WarpTable& w, double h, const GeoState& s,
                    GeoState& d) {
  const double f = w.warp(s.r);
  const double fp = w.warp_deriv(s.r);
  const double inv_f2 = 1.0 / (f * f);
  d.r = s.pr;
  d.theta = h * inv_f2;
  d.pr = h * h * fp * inv_f2 / f;
}

inline void rk4_step(const WarpTable& w, double hmom, GeoState& s, double dt) {
  GeoState k1, k2, k3, k4, t;
  geo_rhs(w, hmom, s, k1);
  t = {s.r + dt / 2 * k1.r, s.theta + dt / 2 * k1.theta, s.pr + dt / 2 * k1.pr};
  geo_rhs(w, hmom, t, k2);
  t = {s.r + dt / 2 * k2.r, s.theta + dt / 2 * k2.theta, s.pr + dt / 2 * k2.pr};
  geo_rhs(w, hmom, t, k3);
  t = {s.r + dt * k3.r, s.theta + dt * k3.theta, s.pr + dt * k3.pr};
  geo_rhs(w, hmom, t, k4);
  s.r += dt / 6.0 * (k1.r + 2 * k2.r + 2 * k3.r + k4.r);
  s.theta += dt / 6.0 * (k1.theta + 2 * k2.theta + 2 * k3.theta + k4.theta);
  s.pr += dt / 6.0 * (k1.pr + 2 * k2.pr + 2 * k3.pr + k4.pr);
}

SurfaceTangent radial_flow(const SurfaceTangent& v, double t, double dir) {
  const double r_lin = v.r + t * dir;
  if (r_lin >= 0.0) return SurfaceTangent{r_lin, v.theta, v.psi};
  // passed through the pole onto the opposite ray
  return SurfaceTangent{-r_lin, wrap_angle(v.theta + pi),
                        wrap_angle(v.psi + pi)};
}

}  // namespace

SurfaceTangent geodesic_integrate(const SurfaceTangent& v, double t,
                                  const WarpTable& w) {
  const double sp = std::sin(v.psi), cp = std::cos(v.psi);
  if (std::fabs(sp) < 1e-14) return radial_flow(v, t, cp >= 0.0 ? 1.0 : -1.0);

  const double hmom = w.warp(v.r) * sp;
  GeoState s{v.r, v.theta, cp};
  const double step = w.step();
  double remaining = std::fabs(t);
  const double dir = t >= 0.0 ? 1.0 : -1.0;
  while (remaining > 0.0) {
    const double dt = dir * std::min(step, remaining);
    rk4_step(w, hmom, s, dt);
    remaining -= step;
    if (s.r >= w.r_max() - step)
      throw OutOfTable("geodesic left the tabulated disc");
    if (s.r <= 0.0) throw OutOfTable("geodesic ran into the pole");
  }
  const double psi = std::atan2(hmom / w.warp(s.r), s.pr);
  return SurfaceTangent{s.r, wrap_angle(s.theta), wrap_angle(psi)};
}

namespace {

// Signed angular difference folded into (-pi, pi].
double wrap_pm(double a) {
  double r = wrap_angle(a);
  if (r > pi) r -= two_pi;
  return r;
}

// Angle at distance rp from the apex of a constant-curvature triangle with
// apex angle dtheta and far side at distance rq: seed for the shooting angle.
double comparison_angle(double rp, double rq, double dtheta, double kappa) {
  const double s = solve_side_constant(rp, rq, dtheta, kappa);
  const double beta = solve_angle_constant(rp, s, rq, kappa);
  return pi - beta;
}

struct ShotOutcome {
  bool crossed = false;
  GeoState at_crossing{};
  double t = 0;
};

// Integrates from (r_p, 0) at angle psi until theta reaches target.
ShotOutcome shoot_to_angle(double r_p, double psi, double target,
                           double budget, const WarpTable& w) {
  const double hmom = w.warp(r_p) * std::sin(psi);
  GeoState s{r_p, 0.0, std::cos(psi)};
  const double step = w.step();
  double t = 0.0;
  ShotOutcome out;
  while (t < budget) {
    const GeoState prev = s;
    rk4_step(w, hmom, s, step);
    t += step;
    if (s.r >= w.r_max() - step) return out;  // escaped: counts as no crossing
    if (s.r <= step) {
      // a pass this close to the pole sweeps theta by ~ pi, beyond any
      // target; report a crossing at the pole so the bracketing sign is
      // right (true solutions stay away from here)
      out.crossed = true;
      out.at_crossing = s;
      out.at_crossing.r = std::max(s.r, 0.0);
      out.t = t;
      return out;
    }
    if (s.theta >= target) {
      // bisect the crossing time inside the step: theta is monotone but can
      // sweep sharply on near-pole passes, so Newton from the step start is
      // not safe
      double t_lo = 0.0, t_hi = step;
      GeoState at_hi = s;
      for (int it = 0; it < 60 && t_hi - t_lo > 1e-14; ++it) {
        const double tm = 0.5 * (t_lo + t_hi);
        GeoState probe = prev;
        rk4_step(w, hmom, probe, tm);
        if (probe.theta >= target) {
          t_hi = tm;
          at_hi = probe;
        } else {
          t_lo = tm;
        }
      }
      out.crossed = true;
      out.at_crossing = at_hi;
      out.t = t - step + t_hi;
      return out;
    }
  }
  return out;
}

}  // namespace

SurfaceGeodesic connect_by_shooting(const SurfacePoint& p, const SurfacePoint& q,
                                    const WarpTable& w) {
  const double dth = wrap_pm(q.theta - p.theta);
  SurfaceGeodesic out;

  if (std::fabs(dth) < 1e-12) {  // common radial ray
    if (std::fabs(q.r - p.r) < 1e-15)
      throw DomainError("shooting needs distinct endpoints");
    const double psi = q.r > p.r ? 0.0 : pi;
    out.departure = SurfaceTangent{p.r, p.theta, psi};
    out.arrival = SurfaceTangent{q.r, q.theta, psi};
    out.length = std::fabs(q.r - p.r);
    return out;
  }
  if (std::fabs(std::fabs(dth) - pi) < 1e-12) {  // antipodal: through the pole
    out.departure = SurfaceTangent{p.r, p.theta, pi};
    out.arrival = SurfaceTangent{q.r, q.theta, 0.0};
    out.length = p.r + q.r;
    return out;
  }

  const double sgn = dth > 0.0 ? 1.0 : -1.0;
  const double target = std::fabs(dth);
  const double budget = p.r + q.r + 1.0;

  // residual r(crossing) - r_q; no crossing within budget counts as +inf
  int evals = 0;
  double best_psi = 0.0, best_res = 1e300;
  ShotOutcome best;
  auto residual = [&](double psi) {
    ++evals;
    const ShotOutcome shot = shoot_to_angle(p.r, psi, target, budget, w);
    const double res = shot.crossed ? shot.at_crossing.r - q.r : 1e300;
    if (shot.crossed && std::fabs(res) < std::fabs(best_res)) {
      best_psi = psi;
      best_res = res;
      best = shot;
    }
    return res;
  };

  const CurvatureBounds cb = w.extracted_bounds();
  const double seed1 = comparison_angle(p.r, q.r, target, cb.kappa1);
  const double seed2 = comparison_angle(p.r, q.r, target, cb.kappa2);
  double lo = std::clamp(std::min(seed1, seed2) - 0.05, 1e-8, pi - 1e-8);
  double hi = std::clamp(std::max(seed1, seed2) + 0.05, 1e-8, pi - 1e-8);
  double flo = residual(lo);
  double fhi = residual(hi);
  for (int grow = 0; (flo < 0.0 || fhi > 0.0) && grow < 6; ++grow) {
    // widen until the bracket straddles the root (flo > 0 > fhi)
    lo = std::clamp(lo - 0.3, 1e-8, pi - 1e-8);
    hi = std::clamp(hi + 0.3, 1e-8, pi - 1e-8);
    flo = residual(lo);
    fhi = residual(hi);
  }
  if (!(flo >= 0.0 && fhi <= 0.0))
    throw NoConvergence("shooting bracket failed to straddle the target");

  while (hi - lo > 1e-4 && evals < 90) {
    const double mid = 0.5 * (lo + hi);
    const double fmid = residual(mid);
    if (fmid >= 0.0) {
      lo = mid;
      flo = fmid;
    } else {
      hi = mid;
      fhi = fmid;
    }
  }
  // secant refinement inside the bracket
  double a = lo, fa = flo, b = hi, fb = fhi;
  for (int it = 0; it < 40 && std::fabs(best_res) > 1e-10 && evals < 140; ++it) {
    double c = (fb == fa) ? 0.5 * (a + b) : b - fb * (b - a) / (fb - fa);
    if (!(c > lo && c < hi)) c = 0.5 * (a + b);
    const double fc = residual(c);
    if (fc >= 0.0) {
      a = c;
      fa = fc;
    } else {
      b = c;
      fb = fc;
    }
  }
  if (std::fabs(best_res) > 1e-7)
    throw NoConvergence("shooting did not reach the endpoint tolerance");

  const GeoState& sc = best.at_crossing;
  const double psi_arr =
      wrap_angle(std::atan2(w.warp(p.r) * std::sin(best_psi) / w.warp(sc.r),
                            sc.pr));
  out.departure = SurfaceTangent{
      p.r, p.theta, wrap_angle(sgn > 0 ? best_psi : two_pi - best_psi)};
  out.arrival = SurfaceTangent{sc.r, wrap_angle(p.theta + sgn * sc.theta),
                               wrap_angle(sgn > 0 ? psi_arr : two_pi - psi_arr)};
  out.length = best.t;
  out.iterations = evals;
  return out;
}

double surface_distance(const SurfacePoint& p, const SurfacePoint& q,
                        const WarpTable& w) {
  if (std::fabs(p.r - q.r) < 1e-15 &&
      std::fabs(wrap_pm(p.theta - q.theta)) < 1e-15)
    return 0.0;
  return connect_by_shooting(p, q, w).length;
}

TriangleSample sample_triangle(std::uint64_t seed, const WarpTable& w,
                               double r_min, double r_max) {
  Rng rng(seed, 0x5u);
  for (int attempt = 0; attempt < 200; ++attempt) {
    SurfacePoint p[3];
    for (auto& v : p) {
      v.r = rng.uniform(r_min, r_max);
      v.theta = rng.uniform(0.0, two_pi);
    }
    bool ok = true;
    for (int i = 0; i < 3 && ok; ++i) {
      const double d = std::fabs(wrap_pm(p[i].theta - p[(i + 1) % 3].theta));
      if (d < 0.2 || d > pi - 0.2) ok = false;
    }
    if (!ok) continue;

    try {
      const SurfaceGeodesic s12 = connect_by_shooting(p[0], p[1], w);
      const SurfaceGeodesic s23 = connect_by_shooting(p[1], p[2], w);
      const SurfaceGeodesic s31 = connect_by_shooting(p[2], p[0], w);
      auto vertex_angle = [](const SurfaceTangent& out_dir,
                             const SurfaceTangent& in_arr) {
        return angle_between_directions(out_dir.psi, in_arr.psi + pi);
      };
      TriangleSample t;
      t.l3 = s12.length;
      t.l1 = s23.length;
      t.l2 = s31.length;
      t.a1 = vertex_angle(s12.departure, s31.arrival);
      t.a2 = vertex_angle(s23.departure, s12.arrival);
      t.a3 = vertex_angle(s31.departure, s23.arrival);
      t.source = TriangleSource::Variable;
      const CurvatureBounds cb = w.extracted_bounds();
      t.kappa1 = cb.kappa1;
      t.kappa2 = cb.kappa2;
      if (std::min({t.a1, t.a2, t.a3}) < 1e-3 ||
          std::max({t.a1, t.a2, t.a3}) > pi - 1e-3 ||
          std::min({t.l1, t.l2, t.l3}) < 0.1)
        continue;
      validate_triangle(t);
      return t;
    } catch (const NoConvergence&) {
      continue;
    } catch (const InvalidTriangle&) {
      continue;
    }
  }
  throw NoConvergence("triangle sampling failed to produce a valid sample");
}

namespace {

// Dense trajectory of a geodesic segment for cheap point lookup.
struct SurfacePath {
  std::vector<SurfaceTangent> states;  // every integration step
  double step;

  SurfacePoint at(double t) const {
    const double pos = t / step;
    const int i = std::clamp(static_cast<int>(pos), 0,
                             static_cast<int>(states.size()) - 2);
    const double u = pos - i;
    const SurfaceTangent& s0 = states[i];
    const SurfaceTangent& s1 = states[i + 1];
    return SurfacePoint{s0.r + u * (s1.r - s0.r),
                        s0.theta + u * wrap_pm(s1.theta - s0.theta)};
  }
  SurfaceTangent tangent_at(double t) const {
    const double pos = t / step;
    const int i = std::clamp(static_cast<int>(pos), 0,
                             static_cast<int>(states.size()) - 2);
    const double u = pos - i;
    const SurfaceTangent& s0 = states[i];
    const SurfaceTangent& s1 = states[i + 1];
    return SurfaceTangent{s0.r + u * (s1.r - s0.r),
                          s0.theta + u * wrap_pm(s1.theta - s0.theta),
                          wrap_angle(s0.psi + u * wrap_pm(s1.psi - s0.psi))};
  }
};

SurfacePath trace_path(const SurfaceTangent& start, double length,
                       const WarpTable& w) {
  SurfacePath path;
  path.step = w.step();
  const int n = std::max(1, static_cast<int>(std::ceil(length / path.step)));
  path.states.reserve(n + 1);
  const double sp = std::sin(start.psi), cp = std::cos(start.psi);
  const double hmom = w.warp(start.r) * sp;
  GeoState s{start.r, start.theta, cp};
  path.states.push_back(start);
  for (int i = 0; i < n; ++i) {
    rk4_step(w, hmom, s, path.step);
    const double psi = std::atan2(hmom / w.warp(s.r), s.pr);
    path.states.push_back(SurfaceTangent{s.r, s.theta, wrap_angle(psi)});
  }
  return path;
}

}  // namespace

double surface_distance_to_segment(const SurfacePoint& x, const SurfacePoint& a,
                                   const SurfacePoint& b, const WarpTable& w) {
  const SurfaceGeodesic ab = connect_by_shooting(a, b, w);
  const SurfacePath path = trace_path(ab.departure, ab.length, w);

  // derivative of t -> d(x, c(t)) is -cos(angle between c'(t) and the
  // direction toward x); the function is convex, so one sign change at most
  auto near_x = [&](const SurfacePoint& c) {
    return std::fabs(c.r - x.r) + std::fabs(wrap_pm(c.theta - x.theta)) < 1e-6;
  };
  auto deriv = [&](double t) {
    const SurfaceTangent ct = path.tangent_at(t);
    const SurfacePoint c{ct.r, ct.theta};
    if (near_x(c)) return 0.0;  // essentially on the segment
    const SurfaceGeodesic toward = connect_by_shooting(c, x, w);
    return -std::cos(angle_between_directions(ct.psi, toward.departure.psi));
  };

  double lo = 0.0, hi = ab.length;
  double dlo = deriv(lo);
  double t_star;
  if (dlo >= 0.0) {
    t_star = 0.0;
  } else {
    double dhi = deriv(hi);
    if (dhi <= 0.0) {
      t_star = ab.length;
    } else {
      for (int it = 0; it < 60 && hi - lo > 1e-9; ++it) {
        double mid;
        if (it >= 5 && dhi != dlo) {
          mid = lo - dlo * (hi - lo) / (dhi - dlo);  // secant once bracketed
          const double guard = 0.02 * (hi - lo);
          if (!(mid > lo + guard && mid < hi - guard)) mid = 0.5 * (lo + hi);
        } else {
          mid = 0.5 * (lo + hi);
        }
        const double dm = deriv(mid);
        if (dm < 0.0) {
          lo = mid;
          dlo = dm;
        } else {
          hi = mid;
          dhi = dm;
        }
      }
      t_star = 0.5 * (lo + hi);
    }
  }
  const SurfacePoint foot = path.at(t_star);
  if (near_x(foot)) return 0.0;
  return surface_distance(x, foot, w);
}

CorollaryMeasurement build_corollary_surface(const SurfacePoint& apex,
                                             double base_dir, double a3,
                                             double l1, double l2,
                                             const WarpTable& w,
                                             int side_samples) {
  const SurfaceTangent leg1{apex.r, apex.theta, wrap_angle(base_dir + a3 / 2.0)};
  const SurfaceTangent leg2{apex.r, apex.theta, wrap_angle(base_dir - a3 / 2.0)};
  const SurfacePoint p2 = basepoint(geodesic_integrate(leg1, l1, w));
  const SurfacePoint p1 = basepoint(geodesic_integrate(leg2, l2, w));

  const SurfaceGeodesic s12 = connect_by_shooting(p1, p2, w);
  const SurfaceGeodesic back1 = connect_by_shooting(p1, apex, w);
  const SurfaceGeodesic back2 = connect_by_shooting(p2, apex, w);

  CorollaryMeasurement m;
  m.l1 = l1;
  m.l2 = l2;
  m.l3 = s12.length;
  m.a3 = a3;
  m.a1 = angle_between_directions(s12.departure.psi, back1.departure.psi);
  m.a2 = angle_between_directions(s12.arrival.psi + pi, back2.departure.psi);

  double worst = 0.0;
  for (int i = 0; i <= side_samples; ++i) {
    const double u = static_cast<double>(i) / side_samples;
    const SurfacePoint q1 = basepoint(geodesic_integrate(leg1, u * l1, w));
    const SurfacePoint q2 = basepoint(geodesic_integrate(leg2, u * l2, w));
    worst = std::max({worst, surface_distance_to_segment(q1, p1, p2, w),
                      surface_distance_to_segment(q2, p1, p2, w)});
  }
  m.max_side_dist = worst;
  return m;
}

TriangleSample build_right_triangle_surface(const SurfacePoint& apex,
                                            double base_dir, double l1,
                                            double l2, const WarpTable& w) {
  const CorollaryMeasurement m =
      build_corollary_surface(apex, base_dir, half_pi, l1, l2, w, 1);
  TriangleSample t;
  t.l1 = m.l1;
  t.l2 = m.l2;
  t.l3 = m.l3;
  t.a1 = m.a1;
  t.a2 = m.a2;
  t.a3 = half_pi;
  t.source = TriangleSource::Variable;
  const CurvatureBounds cb = w.extracted_bounds();
  t.kappa1 = cb.kappa1;
  t.kappa2 = cb.kappa2;
  validate_triangle(t);
  return t;
}

PerpProjSample build_perp_proj_surface(const SurfaceTangent& base, double r1,
                                       double r2, double t1, double t2,
                                       const WarpTable& w) {
  if (r1 < 0 || r2 < 0) throw DomainError("perpendicular distances must be >= 0");
  auto off = [&](double t, double r) {
    SurfaceTangent foot = geodesic_integrate(base, t, w);
    foot.psi = wrap_angle(foot.psi + half_pi);
    return r == 0.0 ? basepoint(foot) : basepoint(geodesic_integrate(foot, r, w));
  };
  const SurfacePoint x1 = off(t1, r1);
  const SurfacePoint x2 = off(t2, r2);
  return PerpProjSample{r1, r2, std::fabs(t2 - t1),
                        surface_distance(x1, x2, w)};
}

}  // namespace hypflow
