#pragma once

// Discrete-group presets and word machinery: Schottky pairs certified by
// isometric-circle ping-pong, the genus-2 octagon preset, conjugacy-class
// enumeration with translation lengths, an injectivity-radius proxy and
// self-crossing detection for word geodesics.

#include <cstdint>
#include <string>
#include <vector>

#include "hypflow/hyp2.hpp"

namespace hypflow {

struct NotDiscrete : std::runtime_error {
  explicit NotDiscrete(const std::string& what) : std::runtime_error(what) {}
};
struct BudgetExceeded : std::runtime_error {
  explicit BudgetExceeded(const std::string& what) : std::runtime_error(what) {}
};

struct GeneratorSet {
  CurvatureScale kappa;
  std::vector<std::string> names;
  std::vector<Isometry> gens;
  bool pingpong_certified = false;
  double certificate_margin = 0.0;  // min gap between isometric-circle discs
};

/// Hyperbolic translation of the given length along the oriented geodesic
/// (neg -> pos).
Isometry translation_along(const BoundaryPoint& neg, const BoundaryPoint& pos,
                           double length, CurvatureScale k);

/// Two hyperbolic generators translating by `strength` along the geodesics
/// with feet (-separation-1, -separation+1) and (separation-1, separation+1).
/// The ping-pong certificate (pairwise disjoint isometric-circle discs) is
/// evaluated and stored; with strict = true a failed certificate throws
/// NotDiscrete.
GeneratorSet schottky_generators(double separation, double strength,
                                 CurvatureScale k, bool strict = true);

/// Disjointness of the isometric circles of all generators and inverses.
/// Returns the minimal gap (negative = overlap); elements fixing infinity
/// have no isometric circle and make the certificate fail.
bool pingpong_certificate(const std::vector<Isometry>& gens, double* margin);

/// Genus-2 surface group of the regular hyperbolic octagon: four rotated
/// copies of a translation of length 2 arcosh(1 + sqrt 2) through i.
/// Demonstration preset; the defining relation
/// g0 g1^-1 g2 g3^-1 g0^-1 g1 g2^-1 g3 = id is verified on construction.
GeneratorSet genus2_generators(CurvatureScale k);

/// Word in the generators: letters +i / -i denote gens[i-1]^{+1} / ^{-1}.
struct Word {
  std::vector<int> letters;
};

std::string word_to_string(const Word& w, const GeneratorSet& gs);
Isometry word_matrix(const Word& w, const GeneratorSet& gs);
Word word_inverse(const Word& w);

/// Removes adjacent and wrap-around cancellations.
Word cyclic_reduce(Word w);

/// Canonical conjugacy-class representative: the lexicographically least
/// rotation among the cyclic rotations of the reduced word and of its inverse.
Word canonical_class_rep(const Word& w);

struct ConjClass {
  Word rep;
  double length = 0;  // translation length of the class
};

/// One cyclically reduced representative per conjugacy class (up to rotation
/// and inversion) of reduced word length in [1, L], sorted by translation
/// length.  L is capped at 12.
std::vector<ConjClass> enumerate_conjugacy(const GeneratorSet& gs, int L);

/// Half the minimal translation length over classes of word length <= L.
/// A proxy: short geodesics of long word length may be missed beyond L.
double injectivity_lower_bound(const GeneratorSet& gs, int L);

struct Crossing {
  double T1 = 0;    // time offset between the two visits, in (0, T)
  double eps = 0;   // crossing angle between one branch and the reversed other
  double s0 = 0;    // axis time of the later visit within [0, T)
  double s1 = 0;    // axis time of the earlier visit within [0, T)
  Word eta;         // deck element carrying the axis to the crossing branch
};

/// Self-crossings of the closed geodesic of `word`, found by intersecting
/// the axis with its translates by words of length <= L_cut within one
/// period window.  The list is complete only up to L_cut.
std::vector<Crossing> detect_crossings(const Word& word, const GeneratorSet& gs,
                                       int L_cut, CurvatureScale k);

void save_generators_json(const GeneratorSet& gs, const std::string& path);
GeneratorSet load_generators_json(const std::string& path, CurvatureScale k);

}  // namespace hypflow
