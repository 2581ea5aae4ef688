#pragma once

// Rotationally symmetric Hadamard surface dr^2 + f(r)^2 dtheta^2 with
// prescribed pinched negative curvature K(r) = -f''(r)/f(r), used to
// generate genuinely variable-curvature triangles and projection
// configurations.  Negative curvature is certified by construction and
// geodesics reduce to a 3-dimensional ODE with the conserved Clairaut
// integral f(r) sin(psi).

#include <cstdint>
#include <vector>

#include "hypflow/comparison.hpp"
#include "hypflow/hyp2.hpp"

namespace hypflow {

struct ProfileOutOfRange : std::domain_error {
  explicit ProfileOutOfRange(const std::string& what)
      : std::domain_error(what) {}
};
struct OutOfTable : std::runtime_error {
  explicit OutOfTable(const std::string& what) : std::runtime_error(what) {}
};
struct NoConvergence : std::runtime_error {
  explicit NoConvergence(const std::string& what) : std::runtime_error(what) {}
};

/// K(r) = -kappa2^2 + (kappa2^2 - kappa1^2) s((r - r_lo)/(r_hi - r_lo)) with
/// s the quintic smoothstep: constant -kappa2^2 near the pole, -kappa1^2
/// outside r_hi, C^2 throughout.
struct CurvatureProfile {
  double kappa1 = 0.5;
  double kappa2 = 1.0;
  double r_lo = 1.0;
  double r_hi = 2.0;

  double curvature(double r) const;
};

/// Solution table of f'' = -K(r) f, f(0) = 0, f'(0) = 1 on a uniform grid,
/// evaluated between nodes by cubic Hermite interpolation (f'' at the nodes
/// is known exactly from the profile).
class WarpTable {
 public:
  WarpTable(CurvatureProfile profile, double step, double r_max);

  double warp(double r) const;        // f(r)
  double warp_deriv(double r) const;  // f'(r)
  double curvature(double r) const { return profile_.curvature(r); }

  double step() const { return step_; }
  double r_max() const { return r_max_; }
  const CurvatureProfile& profile() const { return profile_; }

  /// Extracted pinching bounds: sqrt(-max K), sqrt(-min K) over the grid.
  CurvatureBounds extracted_bounds() const;

 private:
  CurvatureProfile profile_;
  double step_;
  double r_max_;
  std::vector<double> f_, fp_;
};

/// Integrates the warp ODE with RK4 at the given step (spec'd <= 1e-3) and
/// validates the Jacobi comparison sinh(k1 r)/k1 <= f <= sinh(k2 r)/k2.
WarpTable build_surface(const CurvatureProfile& p, double step,
                        double r_max = 12.0);

struct SurfacePoint {
  double r = 0, theta = 0;
};

/// Unit tangent: polar footpoint plus angle psi to the radial direction.
struct SurfaceTangent {
  double r = 0, theta = 0, psi = 0;
};

inline SurfacePoint basepoint(const SurfaceTangent& v) {
  return SurfacePoint{v.r, v.theta};
}

/// phi^t on the surface: fixed-step RK4 in (r, theta, dr/dt) with the
/// angular momentum f(r)^2 dtheta/dt held as the exact Clairaut constant.
SurfaceTangent geodesic_integrate(const SurfaceTangent& v, double t,
                                  const WarpTable& w);

struct SurfaceGeodesic {
  SurfaceTangent departure;  // unit tangent at p toward q
  SurfaceTangent arrival;    // unit tangent at q pointing onward (away from p)
  double length = 0;
  int iterations = 0;
};

/// Unique connecting geodesic, solved by shooting on the departure angle:
/// bisection on a bracket seeded from the two constant-curvature comparison
/// angles, refined by secant steps.  Endpoint error <= 1e-7.
SurfaceGeodesic connect_by_shooting(const SurfacePoint& p, const SurfacePoint& q,
                                    const WarpTable& w);

double surface_distance(const SurfacePoint& p, const SurfacePoint& q,
                        const WarpTable& w);

/// Deterministic random triangle with vertices in the annulus
/// r in [r_min, r_max], degenerate configurations re-sampled.  Sides and
/// angles come from three shooting solves; the sample carries the surface's
/// extracted curvature bounds.
TriangleSample sample_triangle(std::uint64_t seed, const WarpTable& w,
                               double r_min = 0.6, double r_max = 3.2);

/// Convex distance from x to the geodesic segment from a to b, minimized
/// over the foot parameter by golden-section on shooting distances.
double surface_distance_to_segment(const SurfacePoint& x, const SurfacePoint& a,
                                   const SurfacePoint& b, const WarpTable& w);

/// Triangle with exact angle a3 at the vertex `apex` and prescribed adjacent
/// side lengths; max_side_dist sampled at side_samples points per side.
CorollaryMeasurement build_corollary_surface(const SurfacePoint& apex,
                                             double base_dir, double a3,
                                             double l1, double l2,
                                             const WarpTable& w,
                                             int side_samples);

/// Right triangle on the surface: legs of lengths l1, l2 leave `apex` at
/// exact right angle; returns the full measured TriangleSample.
TriangleSample build_right_triangle_surface(const SurfacePoint& apex,
                                            double base_dir, double l1,
                                            double l2, const WarpTable& w);

/// Perpendicular-projection configuration along a base geodesic through
/// `base` in direction base_dir: feet at arc parameters t1, t2, offsets
/// r1, r2 on the same side.
PerpProjSample build_perp_proj_surface(const SurfaceTangent& base, double r1,
                                       double r2, double t1, double t2,
                                       const WarpTable& w);

}  // namespace hypflow
