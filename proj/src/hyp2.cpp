#include "hypflow/hyp2.hpp"

#include <algorithm>
#include <cmath>

namespace hypflow {

double wrap_angle(double a) {
  double r = std::fmod(a, two_pi);
  if (r < 0.0) r += two_pi;
  if (r >= two_pi) r = 0.0;  // fmod can land exactly on 2*pi after the add
  return r;
}

double angle_between_directions(double a, double b) {
  double d = std::fabs(wrap_angle(a) - wrap_angle(b));
  if (d > pi) d = two_pi - d;
  return d;
}

namespace {

// ad - bc with one compensated step: the naive difference cancels
// catastrophically for matrices with large entries and nearly unit
// determinant, which is exactly the word-product case.
double det2(double a, double b, double c, double d) {
  const double w = b * c;
  const double err = std::fma(b, c, -w);
  return std::fma(a, d, -w) - err;
}

}  // namespace

namespace {

// Shared normalization.  For entries of magnitude m the determinant of a
// rounded product chain carries noise ~ m^2 times the accumulated rounding;
// inside that band the true value is 1 and dividing by sqrt(det) would only
// inject the noise into the entries, so the rescale is skipped.  Products of
// unit-determinant factors (strict = false) treat an unusable determinant as
// noise; raw external entries (strict = true) must have det clearly positive.
Isometry normalize_entries(double a, double b, double c, double d, bool strict) {
  const double det = det2(a, b, c, d);
  const double m = std::max({std::fabs(a), std::fabs(b), std::fabs(c),
                             std::fabs(d)});
  const double band = 1e-10 * std::max(1.0, m * m);
  double s = 1.0;
  if (std::fabs(det - 1.0) > band) {
    if (det > 0.0) {
      s = 1.0 / std::sqrt(det);
    } else if (strict) {
      throw DomainError("isometry must have positive determinant");
    }
  }
  Isometry g{a * s, b * s, c * s, d * s};
  // canonical representative of {m, -m}: trace >= 0, ties broken on c then b then a
  double t = g.a + g.d;
  bool negate = t < 0.0;
  if (t == 0.0) {
    if (g.c != 0.0)
      negate = g.c < 0.0;
    else if (g.b != 0.0)
      negate = g.b < 0.0;
    else
      negate = g.a < 0.0;
  }
  if (negate) {
    g.a = -g.a;
    g.b = -g.b;
    g.c = -g.c;
    g.d = -g.d;
  }
  return g;
}

}  // namespace

Isometry Isometry::from_entries(double a, double b, double c, double d) {
  return normalize_entries(a, b, c, d, true);
}

Isometry Isometry::inverse() const {
  return normalize_entries(d, -b, -c, a, false);
}

PointUHP Isometry::apply(const PointUHP& p) const {
  // w = (az+b)/(cz+d); Im w = Im z / |cz+d|^2 since det = 1, which keeps the
  // imaginary part positive even when the naive difference would cancel.
  const double dr = c * p.x + d;
  const double di = c * p.y;
  const double n2 = dr * dr + di * di;
  const double nr = a * p.x + b;
  const double ni = a * p.y;
  return PointUHP{(nr * dr + ni * di) / n2, p.y / n2};
}

BoundaryPoint Isometry::apply(const BoundaryPoint& xi) const {
  if (xi.at_infinity) {
    if (c == 0.0) return BoundaryPoint::infinity();
    return BoundaryPoint::finite(a / c);
  }
  const double den = c * xi.value + d;
  if (den == 0.0) return BoundaryPoint::infinity();
  return BoundaryPoint::finite((a * xi.value + b) / den);
}

UnitTangent Isometry::apply(const UnitTangent& v) const {
  // The Mobius derivative 1/(cz+d)^2 rotates tangent directions by
  // -2 arg(cz+d).
  const double dr = c * v.base.x + d;
  const double di = c * v.base.y;
  const double rot = -2.0 * std::atan2(di, dr);
  return UnitTangent{apply(v.base), wrap_angle(v.dir + rot)};
}

Isometry operator*(const Isometry& g, const Isometry& h) {
  return normalize_entries(g.a * h.a + g.b * h.c, g.a * h.b + g.b * h.d,
                           g.c * h.a + g.d * h.c, g.c * h.b + g.d * h.d, false);
}

bool approx_equal(const Isometry& g, const Isometry& h, double tol) {
  const double dp = std::max({std::fabs(g.a - h.a), std::fabs(g.b - h.b),
                              std::fabs(g.c - h.c), std::fabs(g.d - h.d)});
  const double dm = std::max({std::fabs(g.a + h.a), std::fabs(g.b + h.b),
                              std::fabs(g.c + h.c), std::fabs(g.d + h.d)});
  return std::min(dp, dm) <= tol;
}

IsometryClass classify(const Isometry& g, double tol) {
  const double t = std::fabs(g.trace());
  if (t > 2.0 + tol) return IsometryClass::Hyperbolic;
  if (t < 2.0 - tol) return IsometryClass::Elliptic;
  if (std::fabs(g.b) <= tol && std::fabs(g.c) <= tol &&
      std::fabs(std::fabs(g.a) - 1.0) <= tol)
    return IsometryClass::Identity;
  return IsometryClass::Parabolic;
}

double distance(const PointUHP& p, const PointUHP& q, CurvatureScale k) {
  // sinh(kappa d / 2) = |p-q| / (2 sqrt(Im p Im q)); asinh keeps full
  // precision for nearby points where acosh(1 + u) would lose half the digits.
  const double dx = p.x - q.x;
  const double dy = p.y - q.y;
  const double s = std::sqrt(dx * dx + dy * dy) / (2.0 * std::sqrt(p.y * q.y));
  return 2.0 * std::asinh(s) / k.kappa;
}

double translation_length(const Isometry& g, CurvatureScale k) {
  if (classify(g) != IsometryClass::Hyperbolic)
    throw NotHyperbolicError("translation length requires |trace| > 2");
  return 2.0 * std::acosh(std::fabs(g.trace()) / 2.0) / k.kappa;
}

Isometry frame_of(const UnitTangent& v) {
  const double sq = std::sqrt(v.base.y);
  const Isometry t{sq, v.base.x / sq, 0.0, 1.0 / sq};  // z -> y z + x
  const double psi = (v.dir - half_pi) / 2.0;
  const double cs = std::cos(psi), sn = std::sin(psi);
  return t * Isometry::from_entries(cs, sn, -sn, cs);
}

UnitTangent geodesic_flow(const UnitTangent& v, double t, CurvatureScale k) {
  const Isometry f = frame_of(v);
  return f.apply(UnitTangent{PointUHP{0.0, std::exp(k.kappa * t)}, half_pi});
}

Isometry isometry_from_frames(const UnitTangent& src, const UnitTangent& dst) {
  return frame_of(dst) * frame_of(src).inverse();
}

double busemann(const BoundaryPoint& xi, const PointUHP& q, const PointUHP& p,
                CurvatureScale k) {
  // Closed form from the limit definition: b_inf(q,p) = log(Im p / Im q);
  // finite xi via the inversion z -> -1/(z - xi), under which
  // Im(-1/(z-xi)) = Im z / |z - xi|^2.
  if (xi.at_infinity) return (std::log(p.y) - std::log(q.y)) / k.kappa;
  const double qx = q.x - xi.value, px = p.x - xi.value;
  const double lq = std::log(qx * qx + q.y * q.y);
  const double lp = std::log(px * px + p.y * p.y);
  return (std::log(p.y) - std::log(q.y) + lq - lp) / k.kappa;
}

double direction_to_boundary(const PointUHP& q, const BoundaryPoint& xi) {
  if (xi.at_infinity) return half_pi;
  const double dx = xi.value - q.x;
  if (dx == 0.0) return wrap_angle(-half_pi);  // straight down
  // Geodesic to xi is the semicircle centered at c on the real axis;
  // c - x = (dx - y^2/dx) / 2.  The tangent at q perpendicular to the
  // radius, oriented so its horizontal component points at xi.
  const double cmx = 0.5 * (dx - q.y * q.y / dx);
  double tx = q.y, ty = cmx;
  if (dx < 0.0) {
    tx = -tx;
    ty = -ty;
  }
  return wrap_angle(std::atan2(ty, tx));
}

double direction_toward(const PointUHP& p, const PointUHP& q) {
  const double dx = q.x - p.x;
  if (dx == 0.0) return q.y > p.y ? half_pi : wrap_angle(-half_pi);
  const double cmx = (q.y * q.y + dx * dx - p.y * p.y) / (2.0 * dx);
  double tx = p.y, ty = cmx;
  if (dx < 0.0) {
    tx = -tx;
    ty = -ty;
  }
  return wrap_angle(std::atan2(ty, tx));
}

UnitTangent tangent_toward(const PointUHP& p, const PointUHP& q) {
  return UnitTangent{p, direction_toward(p, q)};
}

double visibility_angle(const PointUHP& q, const BoundaryPoint& xi,
                        const BoundaryPoint& eta) {
  if (same_boundary_point(xi, eta))
    throw CoincidentBoundaryPoints("visibility angle needs xi != eta");
  return angle_between_directions(direction_to_boundary(q, xi),
                                  direction_to_boundary(q, eta));
}

double d1_metric(const UnitTangent& v, const UnitTangent& w, CurvatureScale k) {
  const double dm = distance(geodesic_flow(v, -1.0, k).base,
                             geodesic_flow(w, -1.0, k).base, k);
  const double dp = distance(geodesic_flow(v, 1.0, k).base,
                             geodesic_flow(w, 1.0, k).base, k);
  return std::max(dm, dp);
}

namespace {

BoundaryPoint mobius_boundary(const Isometry& g, bool at_inf, double x) {
  if (at_inf) {
    if (g.c == 0.0) return BoundaryPoint::infinity();
    return BoundaryPoint::finite(g.a / g.c);
  }
  const double den = g.c * x + g.d;
  if (den == 0.0) return BoundaryPoint::infinity();
  return BoundaryPoint::finite((g.a * x + g.b) / den);
}

}  // namespace

std::pair<BoundaryPoint, BoundaryPoint> endpoints(const UnitTangent& v) {
  const Isometry f = frame_of(v);
  return {mobius_boundary(f, false, 0.0), mobius_boundary(f, true, 0.0)};
}

HopfCoords hopf(const UnitTangent& v, const PointUHP& p0, CurvatureScale k) {
  auto [neg, pos] = endpoints(v);
  return HopfCoords{neg, pos, busemann(neg, v.base, p0, k)};
}

GeodesicLine line_of(const UnitTangent& v) {
  auto [neg, pos] = endpoints(v);
  return GeodesicLine{neg, pos, v};
}

namespace {

// Isometry carrying the oriented imaginary axis (0 -> inf) onto the oriented
// line (neg -> pos).
Isometry line_frame(const BoundaryPoint& neg, const BoundaryPoint& pos) {
  if (same_boundary_point(neg, pos))
    throw CoincidentBoundaryPoints("geodesic endpoints must be distinct");
  if (neg.at_infinity)
    return Isometry::from_entries(pos.value, -1.0, 1.0, 0.0);  // z -> pos - 1/z
  if (pos.at_infinity)
    return Isometry::from_entries(1.0, neg.value, 0.0, 1.0);  // z -> z + neg
  if (pos.value > neg.value)
    return Isometry::from_entries(pos.value, neg.value, 1.0, 1.0);
  return Isometry::from_entries(pos.value, -neg.value, 1.0, -1.0);
}

}  // namespace

GeodesicLine line_through(const BoundaryPoint& neg, const BoundaryPoint& pos,
                          const PointUHP& q, CurvatureScale k) {
  (void)k;  // the foot point does not depend on the curvature scale
  const Isometry m = line_frame(neg, pos);
  const PointUHP qp = m.inverse().apply(q);
  const double r = std::hypot(qp.x, qp.y);
  const UnitTangent base = m.apply(UnitTangent{PointUHP{0.0, r}, half_pi});
  return GeodesicLine{neg, pos, base};
}

GeodesicLine axis(const Isometry& g, CurvatureScale k) {
  if (classify(g) != IsometryClass::Hyperbolic)
    throw NotHyperbolicError("axis requires a hyperbolic isometry");
  double tr = g.trace();
  double a = g.a, b = g.b, c = g.c, d = g.d;
  if (tr < 0.0) {
    a = -a;
    b = -b;
    c = -c;
    d = -d;
    tr = -tr;
  }
  const double disc = std::sqrt(tr * tr - 4.0);
  BoundaryPoint rep, att;
  if (c != 0.0) {
    // stable roots of c z^2 + (d - a) z - b = 0: the naive (lambda - d)/c
    // form cancels catastrophically for nearly diagonal matrices
    const double B = d - a;
    const double q = -0.5 * (B + (B >= 0.0 ? disc : -disc));
    const double z1 = q / c;
    const double z2 = -b / q;
    // the attracting fixed point is where |g'(z)| = |c z + d|^{-2} < 1
    const bool z1_att = std::fabs(c * z1 + d) > 1.0;
    att = BoundaryPoint::finite(z1_att ? z1 : z2);
    rep = BoundaryPoint::finite(z1_att ? z2 : z1);
  } else {
    // Fixed points are infinity and b/(d-a).
    const BoundaryPoint fin = BoundaryPoint::finite(b / (d - a));
    if (std::fabs(a) > std::fabs(d)) {
      att = BoundaryPoint::infinity();
      rep = fin;
    } else {
      att = fin;
      rep = BoundaryPoint::infinity();
    }
  }
  // For products of large-entry matrices the small entries, and with them
  // the quadratic roots, can be pure noise even though the Mobius action on
  // points stays accurate.  Power iteration repairs the endpoints: the
  // north-south dynamics contracts toward the attracting fixed point at
  // rate e^{-2 kappa |g|} per application.
  const Isometry gi = g.inverse();
  for (int i = 0; i < 3; ++i) {
    att = g.apply(att);
    rep = gi.apply(rep);
  }
  if (same_boundary_point(att, rep))
    throw NotHyperbolicError("fixed points collapsed under iteration");
  GeodesicLine line = line_through(rep, att, origin(), k);
  // orientation check: g must translate the base forward along the line
  if (foot_parameter(line, g.apply(line.base.base), k) < 0.0)
    line = line_through(att, rep, origin(), k);
  return line;
}

double foot_parameter(const GeodesicLine& line, const PointUHP& q,
                      CurvatureScale k) {
  const Isometry f = frame_of(line.base);
  const PointUHP qp = f.inverse().apply(q);
  return std::log(std::hypot(qp.x, qp.y)) / k.kappa;
}

GeodesicLine rebase_at_foot(const GeodesicLine& line, const PointUHP& q,
                            CurvatureScale k) {
  const double t = foot_parameter(line, q, k);
  return GeodesicLine{line.neg, line.pos, geodesic_flow(line.base, t, k)};
}

PointUHP point_on_line(const GeodesicLine& line, double t, CurvatureScale k) {
  return geodesic_flow(line.base, t, k).base;
}

double distance_to_segment(const PointUHP& q, const GeodesicSegment& seg,
                           CurvatureScale k) {
  if (seg.t_start > seg.t_end)
    throw DomainError("segment needs t_start <= t_end");
  const double t = std::clamp(foot_parameter(seg.line, q, k), seg.t_start,
                              seg.t_end);
  return distance(q, point_on_line(seg.line, t, k), k);
}

GeodesicSegment segment_between(const PointUHP& p, const PointUHP& q,
                                CurvatureScale k) {
  return GeodesicSegment{line_of(tangent_toward(p, q)), 0.0,
                         distance(p, q, k)};
}

}  // namespace hypflow
