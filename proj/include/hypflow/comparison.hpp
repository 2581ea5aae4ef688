#pragma once

// Checkers for the triangle, angle and projection estimates valid under
// pinched negative curvature, evaluated against exact constant-curvature
// data from hyp2 or measured variable-curvature samples.
//
// Margins are reported in length units for cosh-type relations (both sides
// pulled back through arcosh) and in plain value units for sine/angle
// relations, so a single absolute tolerance is meaningful across scales.
// A margin >= -tolerance counts as a pass; equality cases sit at margin ~ 0.

#include <optional>
#include <vector>

#include "hypflow/bounds.hpp"
#include "hypflow/hyp2.hpp"
#include "hypflow/report.hpp"

namespace hypflow {

struct InvalidTriangle : std::invalid_argument {
  explicit InvalidTriangle(const std::string& what)
      : std::invalid_argument(what) {}
};
struct SideCrossing : std::invalid_argument {
  explicit SideCrossing(const std::string& what)
      : std::invalid_argument(what) {}
};

enum class TriangleSource { Constant, Variable };

/// Geodesic triangle data: side i opposite vertex i, angle a_i at vertex i.
struct TriangleSample {
  double l1 = 0, l2 = 0, l3 = 0;
  double a1 = 0, a2 = 0, a3 = 0;
  TriangleSource source = TriangleSource::Constant;
  double kappa1 = 1.0;  // curvature bounds the sample certifies
  double kappa2 = 1.0;
};

/// Throws InvalidTriangle when sides or angles are out of range.
void validate_triangle(const TriangleSample& t);

/// Exact hyperbolic law of cosines at curvature -kappa^2:
/// cosh(k l3) = cosh(k l1) cosh(k l2) - sinh(k l1) sinh(k l2) cos(a3).
double solve_side_constant(double l1, double l2, double a3, double kappa);

/// Angle at vertex 3 from the three sides (side-side-side law of cosines).
double solve_angle_constant(double l1, double l2, double l3, double kappa);

/// Per-inequality margins for the two cosine laws, the right-angle sine laws
/// and the right-angle-free angle chain.  Sine-law entries are absent unless
/// a3 = pi/2 within right_angle_tol.
struct TriangleMargins {
  double lawcosh_k1 = 0;     // l3 >= arcosh side of the kappa1 law
  double lawcosh_k2 = 0;     // l3 <= arcosh side of the kappa2 law
  double angle_chain_lo = 0; // 2 sin^2(a3/2) - 2 a3^2/pi^2
  double angle_chain_hi = 0; // (cosh(k1 l3)-1)/(sinh(k1 l1) sinh(k1 l2)) - 2 sin^2(a3/2)
  bool right_angle = false;
  double lawsin_k1[2] = {0, 0};  // sinh ratio - sin(a_i), i = 1,2
  double lawsin_k2[2] = {0, 0};  // sin(a_i) - sinh ratio
  double cosh_bound = 0;         // (1/k1) arcosh(1/sin a2) - l1
  double sin_bound = 0;          // cot(a2)/sinh(k1 l3) - sin(a1)
};

TriangleMargins triangle_law_margins(const TriangleSample& t, CurvatureBounds cb,
                                     double right_angle_tol = 1e-6);

/// Folds a batch of samples into one CheckReport per inequality, in a fixed
/// order: lawcosh-k1, lawcosh-k2, angle-chain-lo, angle-chain-hi,
/// lawsin-k1, lawsin-k2, cosh-bound, sin-bound.
std::vector<CheckReport> check_triangle_laws(const std::vector<TriangleSample>& ts,
                                             CurvatureBounds cb, double tolerance);

/// Measured data for a triangle with the obtuse-vertex hypothesis
/// a3 in [pi - eps, pi]: vertex 3 joins the sides of lengths l1 = d(p3,p2)
/// and l2 = d(p3,p1); max_side_dist is the largest sampled distance from
/// points of those two sides to the opposite side c3.
struct CorollaryMeasurement {
  double l1 = 0, l2 = 0, l3 = 0;
  double a1 = 0, a2 = 0, a3 = 0;
  double max_side_dist = 0;
};

struct CorollaryMargins {
  double dist_to_c3 = 0;  // a(eps/2) - max_side_dist
  double side_sum = 0;    // l3 - (R1 + R2 - 2 a(eps/2))
  double sin1 = 0;        // tan(eps)/sinh(k1 R2) - sin(a1)
  double sin2 = 0;        // tan(eps)/sinh(k1 R1) - sin(a2)
};

/// Verifies the large-angle triangle conclusions; R1, R2 are the assumed
/// side lower bounds (l1 >= R1, l2 >= R2 is part of the hypothesis).
CorollaryMargins corollary_margins(const CorollaryMeasurement& m, double eps,
                                   double R1, double R2, double kappa1);

/// Constant-curvature construction of a corollary triangle with exact angle
/// a3 at vertex p3 = i and prescribed adjacent side lengths, sampling
/// side_samples points per side for the distance-to-c3 measurement.
CorollaryMeasurement build_corollary_uhp(double a3, double l1, double l2,
                                         CurvatureScale k, int side_samples);

/// Orthogonal-projection 4-gon data: two points at perpendicular distances
/// r1, r2 from a geodesic over foot parameters separated by dt, at mutual
/// distance d12, all on one side.
struct PerpProjSample {
  double r1 = 0, r2 = 0, dt = 0, d12 = 0;
};

/// Margin (in length units) of
/// sinh^2(k d12/2) <= cosh(k r1) cosh(k r2) sinh^2(k dt/2) + sinh^2(k |r2-r1|/2);
/// equality at constant curvature -kappa2^2.
double perp_proj_margin(const PerpProjSample& s, double kappa2);

/// Builds the configuration exactly in the half-plane model (the geodesic is
/// the imaginary axis, both points on the +x side).  Throws SideCrossing when
/// the connecting geodesic meets the axis.
PerpProjSample build_perp_proj_uhp(double r1, double r2, double t1, double t2,
                                   CurvatureScale k);

struct AnglesAtInfinityMargins {
  double forward = 0;   // f(delta) - angle at pi(w) between v+ and w+
  double backward = 0;  // f(delta) - angle at pi(w) between v- and w-
  double relaxed = 0;   // 2 pi delta - max(angle)
};

/// Lemma hypothesis d1(v, w) <= delta, delta in (0, 1/2]; measured at p = pi w.
AnglesAtInfinityMargins check_angles_at_infinity(const UnitTangent& v,
                                                 const UnitTangent& w,
                                                 double delta,
                                                 CurvatureBounds cb,
                                                 CurvatureScale k);

}  // namespace hypflow
