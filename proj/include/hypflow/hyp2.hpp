#pragma once

// Exact geometry of the upper half-plane with constant curvature -kappa^2:
// points, boundary, isometries (SL(2,R) mod +-I acting by Mobius maps),
// geodesics, the geodesic flow, Busemann functions and the dynamical
// metric d1(v,w) = max_{t in [-1,1]} d(c_v(t), c_w(t)).
//
// Curvature -kappa^2 is realized by scaling the kappa = 1 model's distances
// by 1/kappa; the isometry group and all angles are unchanged.

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

namespace hypflow {

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double half_pi = pi / 2.0;
inline constexpr double two_pi = 2.0 * pi;

struct NotHyperbolicError : std::domain_error {
  explicit NotHyperbolicError(const std::string& what) : std::domain_error(what) {}
};
struct CoincidentBoundaryPoints : std::invalid_argument {
  explicit CoincidentBoundaryPoints(const std::string& what) : std::invalid_argument(what) {}
};
struct DomainError : std::domain_error {
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};
struct HypothesisViolated : std::runtime_error {
  explicit HypothesisViolated(const std::string& what) : std::runtime_error(what) {}
};

/// Curvature is -kappa^2, kappa > 0.
struct CurvatureScale {
  double kappa = 1.0;
};

/// Point x + iy of the upper half-plane, y > 0.
struct PointUHP {
  double x = 0.0;
  double y = 1.0;
};

/// The model basepoint i.
inline PointUHP origin() { return PointUHP{0.0, 1.0}; }

/// Point of the circle at infinity: a finite real or the point at infinity.
struct BoundaryPoint {
  double value = 0.0;
  bool at_infinity = false;

  static BoundaryPoint infinity() { return BoundaryPoint{0.0, true}; }
  static BoundaryPoint finite(double v) { return BoundaryPoint{v, false}; }
};

inline bool same_boundary_point(const BoundaryPoint& a, const BoundaryPoint& b) {
  if (a.at_infinity || b.at_infinity) return a.at_infinity && b.at_infinity;
  return a.value == b.value;
}

/// Normalize an angle to [0, 2*pi).
double wrap_angle(double a);

/// Fold the difference of two direction angles into [0, pi].
double angle_between_directions(double a, double b);

/// Unit tangent vector: footpoint plus conformal (Euclidean) direction angle.
struct UnitTangent {
  PointUHP base;
  double dir = half_pi;  // normalized to [0, 2*pi)
};

inline UnitTangent flip(const UnitTangent& v) {
  return UnitTangent{v.base, wrap_angle(v.dir + pi)};
}

inline UnitTangent rotate(const UnitTangent& v, double alpha) {
  return UnitTangent{v.base, wrap_angle(v.dir + alpha)};
}

/// Orientation-preserving isometry: a real 2x2 matrix of determinant one,
/// identified with its negative.  The determinant is renormalized after
/// every product so long words of generators do not drift.
struct Isometry {
  double a = 1.0, b = 0.0, c = 0.0, d = 1.0;

  static Isometry identity() { return Isometry{}; }
  /// Builds from matrix entries; rescales to det 1 (requires det > 0)
  /// and fixes the +-I sign ambiguity canonically.
  static Isometry from_entries(double a, double b, double c, double d);

  double trace() const { return a + d; }
  Isometry inverse() const;

  PointUHP apply(const PointUHP& p) const;
  BoundaryPoint apply(const BoundaryPoint& xi) const;
  UnitTangent apply(const UnitTangent& v) const;
};

Isometry operator*(const Isometry& g, const Isometry& h);

/// True when g and h agree as Mobius transformations (entries equal up to
/// simultaneous sign, within tol).
bool approx_equal(const Isometry& g, const Isometry& h, double tol = 1e-9);

enum class IsometryClass { Identity, Elliptic, Parabolic, Hyperbolic };

/// Trace classification at tolerance 1e-10; near-parabolic elements are
/// reported as Parabolic rather than guessed.
IsometryClass classify(const Isometry& g, double tol = 1e-10);

/// Oriented complete geodesic: ordered endpoint pair at infinity plus the
/// unit tangent giving the time-0 frame of a chosen unit-speed parametrization.
struct GeodesicLine {
  BoundaryPoint neg;  // c(-inf)
  BoundaryPoint pos;  // c(+inf)
  UnitTangent base;   // frame at time 0; flows forward to pos
};

struct GeodesicSegment {
  GeodesicLine line;
  double t_start = 0.0;
  double t_end = 0.0;
};

/// Hyperbolic distance; satisfies cosh(kappa d) = 1 + |p-q|^2 / (2 Im p Im q).
double distance(const PointUHP& p, const PointUHP& q, CurvatureScale k);

/// Translation length (2/kappa) arcosh(|tr g| / 2); throws NotHyperbolicError
/// unless |tr g| > 2 + 1e-10.
double translation_length(const Isometry& g, CurvatureScale k);

/// Invariant geodesic of a hyperbolic isometry, oriented from the repelling
/// to the attracting fixed point, based at the foot of the model basepoint i.
GeodesicLine axis(const Isometry& g, CurvatureScale k);

/// Geodesic flow phi^t.
UnitTangent geodesic_flow(const UnitTangent& v, double t, CurvatureScale k);

/// The unique orientation-preserving isometry carrying the frame src to dst.
Isometry isometry_from_frames(const UnitTangent& src, const UnitTangent& dst);

/// The isometry mapping the standard frame (i, up) to v.
Isometry frame_of(const UnitTangent& v);

/// Busemann function based at xi and normalized by p: b_xi(p, p) = 0.
double busemann(const BoundaryPoint& xi, const PointUHP& q, const PointUHP& p,
                CurvatureScale k);

/// Direction angle at q of the geodesic ray from q to xi.
double direction_to_boundary(const PointUHP& q, const BoundaryPoint& xi);

/// Direction angle at p of the geodesic ray from p through q (p != q).
double direction_toward(const PointUHP& p, const PointUHP& q);

/// Unit tangent at p pointing toward q.
UnitTangent tangent_toward(const PointUHP& p, const PointUHP& q);

/// Conformal angle at q between the rays q -> xi and q -> eta, in [0, pi].
/// Independent of the curvature scale.  Throws CoincidentBoundaryPoints.
double visibility_angle(const PointUHP& q, const BoundaryPoint& xi,
                        const BoundaryPoint& eta);

/// d1(v, w) = max of the endpoint distances at t = -1 and t = +1;
/// the max over [-1,1] is attained there because t -> d(c_v(t), c_w(t))
/// is convex in nonpositive curvature.
double d1_metric(const UnitTangent& v, const UnitTangent& w, CurvatureScale k);

/// Endpoint map v -> (v^-, v^+).
std::pair<BoundaryPoint, BoundaryPoint> endpoints(const UnitTangent& v);

struct HopfCoords {
  BoundaryPoint neg;
  BoundaryPoint pos;
  double s = 0.0;  // b_{v^-}(pi v, p0)
};

/// Hopf parametrization H(v) = (v^-, v^+, b_{v^-}(pi v, p0)).
HopfCoords hopf(const UnitTangent& v, const PointUHP& p0, CurvatureScale k);

/// Complete geodesic determined by a unit tangent.
GeodesicLine line_of(const UnitTangent& v);

/// Oriented line with the given distinct endpoints, based at the foot of q.
GeodesicLine line_through(const BoundaryPoint& neg, const BoundaryPoint& pos,
                          const PointUHP& q, CurvatureScale k);

/// Foot-point parameter of q on the line (time along the base parametrization).
double foot_parameter(const GeodesicLine& line, const PointUHP& q, CurvatureScale k);

/// Same line reparametrized so that time 0 sits at the foot of q.
GeodesicLine rebase_at_foot(const GeodesicLine& line, const PointUHP& q,
                            CurvatureScale k);

PointUHP point_on_line(const GeodesicLine& line, double t, CurvatureScale k);

/// Distance from q to the segment, computed as the distance to the foot point
/// on the full line clamped to the parameter interval.
double distance_to_segment(const PointUHP& q, const GeodesicSegment& seg,
                           CurvatureScale k);

/// Segment from p to q: line based at p toward q, parameters [0, d(p,q)].
GeodesicSegment segment_between(const PointUHP& p, const PointUHP& q,
                                CurvatureScale k);

}  // namespace hypflow
