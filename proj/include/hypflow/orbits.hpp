#pragma once

// Synthesis of self-crossing closed geodesics with prescribed loop lengths
// and crossing angle, and verification of the orbit constructions built on
// them: the closed-up orbit of an almost-recurrent vector, the partner orbit
// of a small-angle crossing, and the pseudo-partner pair of a large-angle
// crossing.  Everything is computed on the universal cover: the synthesized
// deck elements realize the crossing data exactly and every verified
// inequality is a statement about them and their lifts.

#include <cstdint>

#include "hypflow/bounds.hpp"
#include "hypflow/hyp2.hpp"
#include "hypflow/report.hpp"

namespace hypflow {

struct DeltaTooLarge : std::runtime_error {
  explicit DeltaTooLarge(const std::string& what) : std::runtime_error(what) {}
};
struct NoWitness : std::runtime_error {
  explicit NoWitness(const std::string& what) : std::runtime_error(what) {}
};

enum class CrossingMode { Partner, Pseudo };

/// A closed geodesic of period T = T1 + T2 with a self-crossing at the base
/// of v0 at time T1, represented by its deck data on the cover:
/// g closes the full geodesic (|g| = T, axis through pi v0), g1 closes the
/// first loop, g2 = g g1^{-1} the second.  In Partner mode the crossing angle
/// between (g1)_* v0 and -c'(T1) is eps; in Pseudo mode the angle between
/// (g1)_* v0 and +c'(T1) is eps.
struct CrossedGeodesic {
  CurvatureScale kappa;
  UnitTangent v0;
  double T1 = 0, T2 = 0;
  double eps = 0;
  CrossingMode mode = CrossingMode::Partner;
  Isometry g1, g, g2;
  bool eps_in_range = true;  // eps <= eps0 at synthesis time
  bool t_in_range = true;    // min(T1, T2) >= configured t0
};

/// Builds the straight lift from (i, up) and the deck elements realizing the
/// prescribed crossing.  rotation_sign mirrors the crossing orientation; the
/// two are not distinguished by the bounds.
CrossedGeodesic synthesize_crossed_geodesic(double T1, double T2, double eps,
                                            CrossingMode mode, CurvatureScale k,
                                            const BoundConstants& bc,
                                            double rotation_sign = 1.0);

/// Midpoint displacement chain for a geodesic loop with deck element g_loop,
/// start tangent v_start, period T_loop and closing angle
/// (the angle between (g_loop)_* v_start and -c'(T_loop)):
///   cosh(kappa rho_mid) <= 1 + (cosh(kappa T_loop) - 1)(1 - cos angle)/2,
/// with rho_mid = d(c(T/2), g_loop c(T/2)); equality at constant curvature.
/// Returns margin = rhs - cosh(kappa rho_mid).
double loop_midpoint_margin(const Isometry& g_loop, const UnitTangent& v_start,
                            double T_loop, double closing_angle,
                            CurvatureScale k);

struct PartnerResult {
  double T = 0;        // T1 + T2
  double T_hat = 0;    // d(p0, g2^{-1} g1 p0)
  double T_prime = 0;  // |g2^{-1} g1|
  double T3 = 0;       // foot parameter of the crossing point on c3
  double eps = 0;
  double dist_sup = 0;  // sup over sampled axis points of distance to the loops
  double bound_len = 0, bound_dist = 0;
  double len_margin = 0, dist_margin = 0;
  double that_margin = 0;  // 2 a(eps/2) - (T - T_hat)
  double midpoint_margin1 = 0, midpoint_margin2 = 0;
  bool strict_shorter = false;  // T' < T
  double sample_step = 0;
  bool passed() const {
    return len_margin >= 0 && dist_margin >= 0 && strict_shorter;
  }
};

/// Partner orbit of a small-angle crossing: axis of g2^{-1} g1, parametrized
/// from the foot of pi v0.  dist_sup samples the axis at sample_step and
/// measures distance to the lifted loop c[0,T1] for s <= T3 and to the
/// reversed second loop g2^{-1} c(T - t) for s >= T3.
PartnerResult construct_partner(const CrossedGeodesic& cg,
                                const BoundConstants& bc,
                                double sample_step = 0.05);

struct PseudoPartnerResult {
  double T1 = 0, T2 = 0;
  double That1 = 0, That2 = 0;  // |g1|, |g2|
  double eps = 0;
  double dist_sup1 = 0, dist_sup2 = 0;
  double endpoint_gap = 0;  // d(c1(That1), c2(0)) in the cover
  double bound_len = 0, bound_dist = 0, bound_gap = 0;
  double len_margin = 0, dist_margin = 0, gap_margin = 0;
  double nonneg_margin = 0;  // min(T1 - That1, T2 - That2)
  double midpoint_margin1 = 0, midpoint_margin2 = 0;
  double sample_step = 0;
  bool passed() const {
    return len_margin >= 0 && dist_margin >= 0 && gap_margin >= 0 &&
           nonneg_margin >= -1e-9;
  }
};

/// Pseudo-partner pair of a large-angle crossing: axes of g1 and g2,
/// parametrized from the feet of pi v0 and of the crossing point g1 pi v0.
PseudoPartnerResult construct_pseudo_partner(const CrossedGeodesic& cg,
                                             const BoundConstants& bc,
                                             double sample_step = 0.05);

struct RecurrentVector {
  UnitTangent w;
  double delta = 0;  // d1(g_* w, phi^T w) on the cover
};

/// w sits at the given perpendicular distance from axis(g), tilted from the
/// transported axis direction; delta is the recurrence defect for time T.
/// Throws DeltaTooLarge when delta exceeds delta_max.
RecurrentVector synthesize_recurrent(const Isometry& g, double offset,
                                     double tilt, double T, CurvatureScale k,
                                     double delta_max = 1e300);

struct LoopRecurrent {
  UnitTangent w;
  double T = 0;      // d(pi w, g pi w): exact foot-point return time
  double delta = 0;
};

/// Geodesic-loop variant: w points from its base q exactly at g q, so the
/// footpoint of phi^T w coincides with g pi w and only the direction fails
/// to recur.
LoopRecurrent synthesize_loop_recurrent(const Isometry& g, double offset,
                                        CurvatureScale k);

struct ClosingResult {
  double delta = 0;
  double T = 0;
  double T_prime = 0;    // |g|
  double shadow_sup = 0; // max over the s-grid of d1(phi^s w, phi^s u)
  double bound_len = 0, bound_shadow = 0;
  double len_margin = 0, shadow_margin = 0;
  bool foot_case = false;  // g pi w = pi phi^T w within 1e-9
  double foot_bound_len = 0, foot_bound_shadow = 0;
  double foot_len_margin = 0, foot_shadow_margin = 0;
  bool foot_strict = false;  // 0 < T - T'
  double sample_step = 0;
  bool passed() const {
    if (len_margin < 0 || shadow_margin < 0) return false;
    if (foot_case)
      return foot_len_margin >= 0 && foot_shadow_margin >= 0 && foot_strict;
    return true;
  }
};

/// Closes the nearly recurrent orbit of w onto the axis of g, parametrized
/// from the foot of pi w, and checks the quantitative closing bounds; when
/// the footpoint recurs exactly, additionally checks the sharper loop bounds.
ClosingResult close_orbit(const UnitTangent& w, double T, const Isometry& g,
                          const BoundConstants& bc, CurvatureScale k,
                          double sample_step = 0.05);

/// Membership in A_theta(v0): both endpoints within visibility angle theta of
/// the endpoints of v0 as seen from pi v0, and d(pi v, pi v0) <= a(theta).
bool in_A_theta(const UnitTangent& v, const UnitTangent& v0, double theta,
                CurvatureScale k);

/// Checks the cone contraction g F_{rho(theta)} within F_{rho(theta)} and
/// g^{-1} P_{rho(theta)} within P_{rho(theta)} on n sampled boundary
/// directions (the extreme cone directions are always included).  Requires a
/// witness for membership of g in Gamma_theta(v0, t); tries v0 and the
/// tangent from pi v0 toward g pi v0, else throws NoWitness.
CheckReport check_cone_contraction(const Isometry& g, const UnitTangent& v0,
                                   double theta, double t, int n_samples,
                                   const BoundConstants& bc, CurvatureScale k,
                                   std::uint64_t seed, double tolerance = 1e-12);

}  // namespace hypflow
