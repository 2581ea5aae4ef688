#include "hypflow/groups.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>

#include "json.hpp"

namespace hypflow {

Isometry translation_along(const BoundaryPoint& neg, const BoundaryPoint& pos,
                           double length, CurvatureScale k) {
  const GeodesicLine line = line_through(neg, pos, origin(), k);
  const double h = k.kappa * length / 2.0;
  const Isometry f = frame_of(line.base);
  return f * Isometry::from_entries(std::exp(h), 0.0, 0.0, std::exp(-h)) *
         f.inverse();
}

bool pingpong_certificate(const std::vector<Isometry>& gens, double* margin) {
  struct Disc {
    double center, radius;
  };
  std::vector<Disc> discs;
  for (const auto& g : gens) {
    for (const Isometry& m : {g, g.inverse()}) {
      if (m.c == 0.0) {
        if (margin) *margin = -1e300;
        return false;  // fixes infinity: no isometric circle
      }
      discs.push_back({-m.d / m.c, 1.0 / std::fabs(m.c)});
    }
  }
  double worst = 1e300;
  for (std::size_t i = 0; i < discs.size(); ++i)
    for (std::size_t j = i + 1; j < discs.size(); ++j) {
      // the two discs of one generator (its own and its inverse's) may touch
      // only if they belong to different elements; all pairs must be disjoint
      const double gap = std::fabs(discs[i].center - discs[j].center) -
                         (discs[i].radius + discs[j].radius);
      worst = std::min(worst, gap);
    }
  if (margin) *margin = worst;
  return worst > 0.0;
}

GeneratorSet schottky_generators(double separation, double strength,
                                 CurvatureScale k, bool strict) {
  if (!(strength > 0) || 2.0 * std::cosh(k.kappa * strength / 2.0) <= 2.0 + 1e-10)
    throw NotHyperbolicError("generator strength too small: trace within 2 + tol");
  GeneratorSet gs;
  gs.kappa = k;
  gs.names = {"a", "b"};
  // both translations point toward the center: the class of a b is then the
  // figure-eight around the two handles rather than the third boundary
  gs.gens = {translation_along(BoundaryPoint::finite(-separation - 1.0),
                               BoundaryPoint::finite(-separation + 1.0),
                               strength, k),
             translation_along(BoundaryPoint::finite(separation + 1.0),
                               BoundaryPoint::finite(separation - 1.0),
                               strength, k)};
  gs.pingpong_certified = pingpong_certificate(gs.gens, &gs.certificate_margin);
  if (strict && !gs.pingpong_certified)
    throw NotDiscrete("isometric-circle certificate failed (margin " +
                      std::to_string(gs.certificate_margin) + ")");
  return gs;
}

GeneratorSet genus2_generators(CurvatureScale k) {
  GeneratorSet gs;
  gs.kappa = k;
  const double len = 2.0 * std::acosh(1.0 + std::sqrt(2.0)) / k.kappa;
  for (int j = 0; j < 4; ++j) {
    const double phi = j * pi / 4.0;
    const double ps = phi / 2.0;
    const Isometry rot = Isometry::from_entries(std::cos(ps), std::sin(ps),
                                                -std::sin(ps), std::cos(ps));
    // translation through i in tangent direction 0, rotated by j pi / 4
    const Isometry base = translation_along(BoundaryPoint::finite(-1.0),
                                            BoundaryPoint::finite(1.0), len, k);
    gs.gens.push_back(rot * base * rot.inverse());
    gs.names.push_back(std::string(1, static_cast<char>('a' + j)));
  }
  // source check: the octagon relation must close up
  const auto& g = gs.gens;
  const Isometry rel = g[0] * g[1].inverse() * g[2] * g[3].inverse() *
                       g[0].inverse() * g[1] * g[2].inverse() * g[3];
  if (!approx_equal(rel, Isometry::identity(), 1e-9))
    throw std::logic_error("genus-2 preset: octagon relation failed");
  gs.pingpong_certified = false;  // cocompact: no isometric-circle certificate
  gs.certificate_margin = 0.0;
  return gs;
}

std::string word_to_string(const Word& w, const GeneratorSet& gs) {
  std::string s;
  for (int l : w.letters) {
    const int i = std::abs(l) - 1;
    s += gs.names.at(i);
    if (l < 0) s += '\'';
  }
  return s;
}

Isometry word_matrix(const Word& w, const GeneratorSet& gs) {
  Isometry m = Isometry::identity();
  for (int l : w.letters) {
    const auto& g = gs.gens.at(std::abs(l) - 1);
    m = m * (l > 0 ? g : g.inverse());
  }
  return m;
}

Word word_inverse(const Word& w) {
  Word r;
  r.letters.reserve(w.letters.size());
  for (auto it = w.letters.rbegin(); it != w.letters.rend(); ++it)
    r.letters.push_back(-*it);
  return r;
}

Word cyclic_reduce(Word w) {
  auto& v = w.letters;
  bool changed = true;
  while (changed && v.size() > 1) {
    changed = false;
    for (std::size_t i = 0; i + 1 < v.size(); ++i)
      if (v[i] == -v[i + 1]) {
        v.erase(v.begin() + i, v.begin() + i + 2);
        changed = true;
        break;
      }
    if (!changed && v.size() > 1 && v.front() == -v.back()) {
      v.erase(v.begin());
      v.pop_back();
      changed = true;
    }
  }
  return w;
}

namespace {

std::vector<int> min_rotation(const std::vector<int>& v) {
  std::vector<int> best = v;
  std::vector<int> cur = v;
  for (std::size_t i = 1; i < v.size(); ++i) {
    std::rotate(cur.begin(), cur.begin() + 1, cur.end());
    if (cur < best) best = cur;
  }
  return best;
}

}  // namespace

Word canonical_class_rep(const Word& w) {
  const Word r = cyclic_reduce(w);
  if (r.letters.empty()) return r;
  const std::vector<int> a = min_rotation(r.letters);
  const std::vector<int> b = min_rotation(word_inverse(r).letters);
  return Word{std::min(a, b)};
}

std::vector<ConjClass> enumerate_conjugacy(const GeneratorSet& gs, int L) {
  if (L > 12) throw BudgetExceeded("conjugacy enumeration capped at L = 12");
  const int n = static_cast<int>(gs.gens.size());
  std::set<std::vector<int>> seen;
  std::vector<ConjClass> classes;

  std::vector<int> letters;
  for (int i = 1; i <= n; ++i) {
    letters.push_back(i);
    letters.push_back(-i);
  }

  std::vector<int> word;
  auto emit = [&]() {
    if (word.front() == -word.back()) return;  // not cyclically reduced
    const Word canon = canonical_class_rep(Word{word});
    if (canon.letters.empty()) return;
    if (!seen.insert(canon.letters).second) return;
    const Isometry m = word_matrix(canon, gs);
    if (classify(m) != IsometryClass::Hyperbolic) return;
    classes.push_back({canon, translation_length(m, gs.kappa)});
  };
  // depth-first over freely reduced words of length <= L
  auto rec = [&](auto&& self, int depth) -> void {
    if (depth > 0) emit();
    if (depth == L) return;
    for (int l : letters) {
      if (!word.empty() && word.back() == -l) continue;
      word.push_back(l);
      self(self, depth + 1);
      word.pop_back();
    }
  };
  rec(rec, 0);

  std::sort(classes.begin(), classes.end(), [](const auto& x, const auto& y) {
    if (x.length != y.length) return x.length < y.length;
    return x.rep.letters < y.rep.letters;
  });
  return classes;
}

double injectivity_lower_bound(const GeneratorSet& gs, int L) {
  if (!gs.pingpong_certified)
    throw NotDiscrete("injectivity proxy needs a discreteness certificate");
  const auto classes = enumerate_conjugacy(gs, L);
  if (classes.empty()) throw DomainError("no classes enumerated");
  return classes.front().length / 2.0;
}

namespace {

// Position of a boundary point on the circle, as an angle in [0, 2 pi).
double circle_pos(const BoundaryPoint& p) {
  if (p.at_infinity) return pi + pi / 2.0;  // atan(inf) = pi/2 mapped below
  return wrap_angle(2.0 * std::atan(p.value) + pi);
}

bool in_arc(double x, double s, double e) {
  const double span = wrap_angle(e - s);
  return wrap_angle(x - s) < span;
}

bool axes_cross(const GeodesicLine& A, const GeodesicLine& B) {
  if (same_boundary_point(A.neg, B.neg) || same_boundary_point(A.neg, B.pos) ||
      same_boundary_point(A.pos, B.neg) || same_boundary_point(A.pos, B.pos))
    return false;
  const double a1 = circle_pos(A.neg), a2 = circle_pos(A.pos);
  const double b1 = circle_pos(B.neg), b2 = circle_pos(B.pos);
  return in_arc(b1, a1, a2) != in_arc(b2, a1, a2);
}

// Intersection point of two crossing geodesics.
PointUHP line_intersection(const GeodesicLine& A, const GeodesicLine& B) {
  auto as_circle = [](const GeodesicLine& L, double& m, double& r) -> bool {
    if (L.neg.at_infinity || L.pos.at_infinity) {
      m = L.neg.at_infinity ? L.pos.value : L.neg.value;  // vertical at x = m
      return false;
    }
    m = (L.neg.value + L.pos.value) / 2.0;
    r = std::fabs(L.pos.value - L.neg.value) / 2.0;
    return true;
  };
  double m1 = 0, r1 = 0, m2 = 0, r2 = 0;
  const bool c1 = as_circle(A, m1, r1);
  const bool c2 = as_circle(B, m2, r2);
  if (c1 && c2) {
    const double x = (r1 * r1 - r2 * r2 + m2 * m2 - m1 * m1) / (2.0 * (m2 - m1));
    const double y2 = r1 * r1 - (x - m1) * (x - m1);
    return PointUHP{x, std::sqrt(std::max(y2, 1e-300))};
  }
  if (!c1 && !c2) throw DomainError("parallel vertical geodesics do not cross");
  const double v = c1 ? m2 : m1;  // the vertical one's x
  const double m = c1 ? m1 : m2, r = c1 ? r1 : r2;
  const double y2 = r * r - (v - m) * (v - m);
  return PointUHP{v, std::sqrt(std::max(y2, 1e-300))};
}

double mod_period(double s, double T) {
  double r = std::fmod(s, T);
  if (r < 0) r += T;
  return r;
}

}  // namespace

std::vector<Crossing> detect_crossings(const Word& word, const GeneratorSet& gs,
                                       int L_cut, CurvatureScale k) {
  if (L_cut > 10) throw BudgetExceeded("crossing search capped at L_cut = 10");
  const Isometry gamma = word_matrix(word, gs);
  if (classify(gamma) != IsometryClass::Hyperbolic)
    throw NotHyperbolicError("crossing detection needs a hyperbolic word");
  const double T = translation_length(gamma, k);
  const GeodesicLine A = axis(gamma, k);
  // axis parameter of the circle apex: representatives anchored near it are
  // the numerically comfortable ones
  double apex = 0.0;
  if (!A.neg.at_infinity && !A.pos.at_infinity) {
    const double m = (A.neg.value + A.pos.value) / 2.0;
    const double r = std::fabs(A.pos.value - A.neg.value) / 2.0;
    apex = foot_parameter(A, PointUHP{m, r}, k);
  }
  auto rep_score = [&](const Crossing& c) {
    return std::max(std::fabs(c.s1 - apex), std::fabs(c.s1 + c.T1 - apex));
  };

  // enumerate candidate eta words
  const int n = static_cast<int>(gs.gens.size());
  std::vector<Word> candidates;
  std::vector<int> cur;
  auto rec = [&](auto&& self, int depth) -> void {
    if (depth > 0) candidates.push_back(Word{cur});
    if (depth == L_cut) return;
    for (int i = 1; i <= n; ++i)
      for (int l : {i, -i}) {
        if (!cur.empty() && cur.back() == -l) continue;
        cur.push_back(l);
        self(self, depth + 1);
        cur.pop_back();
      }
  };
  rec(rec, 0);

  std::vector<Crossing> out;
  for (const auto& eta : candidates) {
    try {
    const Isometry h = word_matrix(eta, gs);
    // skip powers of gamma (same axis): they commute with gamma
    if (approx_equal(h * gamma, gamma * h, 1e-8)) continue;
    const GeodesicLine hA{h.apply(A.neg), h.apply(A.pos),
                          h.apply(A.base)};
    if (!axes_cross(A, hA)) continue;
    // Rough crossing parameters: only good enough to pick the right
    // period-window representative (integers a, b below).
    const PointUHP x = line_intersection(A, hA);
    if (!(x.y > 1e-12)) continue;
    const double s0_raw = foot_parameter(A, x, k);
    const double s1_raw = foot_parameter(A, h.inverse().apply(x), k);
    const double s1m = mod_period(s1_raw, T);
    const double T1_rough = mod_period(s0_raw - s1_raw, T);
    const long a = std::lround((s1m - s1_raw) / T);
    const long b = std::lround((s1m + T1_rough - s0_raw) / T);
    // conjugating by large powers of gamma destroys the matrix numerically;
    // every crossing also has a representative with small shifts
    if (std::labs(a) > 2 || std::labs(b) > 2) continue;

    Word norm;
    auto append_power = [&](long e) {
      const Word base = e >= 0 ? word : word_inverse(word);
      for (long j = 0; j < std::labs(e); ++j)
        norm.letters.insert(norm.letters.end(), base.letters.begin(),
                            base.letters.end());
    };
    append_power(b);
    norm.letters.insert(norm.letters.end(), eta.letters.begin(),
                        eta.letters.end());
    append_power(-a);
    const Isometry hn = word_matrix(norm, gs);

    // Recompute the visit time exactly, working in source and image frames
    // anchored on the axis: far-window points sit exponentially close to
    // the boundary and the raw side function drowns in rounding there.
    // In these frames the axis is the imaginary axis on both ends and the
    // crossing preimage is a simple sign change of the x-coordinate.
    const double s_img = s1m + T1_rough;
    const Isometry w_src = frame_of(geodesic_flow(A.base, s1m, k));
    const Isometry w_img = frame_of(geodesic_flow(A.base, s_img, k));
    const Isometry local = (w_img.inverse() * hn) * w_src;
    auto chi = [&](double u) {
      return local.apply(PointUHP{0.0, std::exp(k.kappa * u)}).x;
    };
    double lo = -0.75, hi = 0.75;
    double clo = chi(lo), chi_hi = chi(hi);
    if (clo * chi_hi > 0.0) {
      lo = -2.0;
      hi = 2.0;
      clo = chi(lo);
      chi_hi = chi(hi);
      if (clo * chi_hi > 0.0) continue;  // no clean bracket: skip candidate
    }
    for (int it = 0; it < 80 && hi - lo > 1e-13; ++it) {
      const double mid = 0.5 * (lo + hi);
      const double cm = chi(mid);
      if ((cm >= 0.0) == (chi_hi >= 0.0)) {
        hi = mid;
        chi_hi = cm;
      } else {
        lo = mid;
        clo = cm;
      }
    }
    const double u_exact = 0.5 * (lo + hi);
    const double s1_exact = s1m + u_exact;
    const UnitTangent b2_local =
        local.apply(UnitTangent{PointUHP{0.0, std::exp(k.kappa * u_exact)},
                                half_pi});
    const double foot_local =
        std::log(std::hypot(b2_local.base.x, b2_local.base.y)) / k.kappa;
    const double T1 = s_img + foot_local - s1_exact;
    if (T1 < 1e-9 || T - T1 < 1e-9) continue;  // tangential / degenerate
    if (distance(b2_local.base,
                 PointUHP{0.0, std::exp(k.kappa * foot_local)}, k) > 1e-6)
      continue;
    // branch directions at the crossing, both in the image frame where the
    // axis branch points straight up
    const UnitTangent branch2 = b2_local;
    const UnitTangent branch1 =
        UnitTangent{PointUHP{0.0, std::exp(k.kappa * foot_local)}, half_pi};

    // if the exact root slid across a period edge, re-anchor eta so that it
    // carries the published in-window visit time
    const long shift = std::lround((mod_period(s1_exact, T) - s1_exact) / T);
    if (shift != 0) {
      Word shifted;
      auto app = [&](Word& dst, long e) {
        const Word base = e >= 0 ? word : word_inverse(word);
        for (long j = 0; j < std::labs(e); ++j)
          dst.letters.insert(dst.letters.end(), base.letters.begin(),
                             base.letters.end());
      };
      app(shifted, shift);
      shifted.letters.insert(shifted.letters.end(), norm.letters.begin(),
                             norm.letters.end());
      app(shifted, -shift);
      norm = shifted;
    }

    Crossing cr;
    cr.T1 = T1;
    cr.eps = angle_between_directions(branch2.dir, branch1.dir + pi);
    cr.s0 = mod_period(s1_exact + T1, T);
    cr.s1 = mod_period(s1_exact, T);
    cr.eta = norm;

    // the unordered visit pair identifies the crossing on the quotient;
    // merge within tolerance, keeping the representative anchored nearest
    // the apex (ties to the shorter word)
    auto close_mod = [&](double u, double v) {
      const double d = std::fabs(mod_period(u - v + T / 2.0, T) - T / 2.0);
      return d < 2e-3;
    };
    bool dup = false;
    for (auto& prev : out) {
      const bool direct = close_mod(prev.s0, cr.s0) && close_mod(prev.s1, cr.s1);
      const bool swapped = close_mod(prev.s0, cr.s1) && close_mod(prev.s1, cr.s0);
      if (direct || swapped) {
        dup = true;
        const double sn = rep_score(cr), sp = rep_score(prev);
        if (sn < sp - 1e-3 ||
            (sn < sp + 1e-3 && cr.eta.letters.size() < prev.eta.letters.size()))
          prev = cr;
        break;
      }
    }
    if (!dup) out.push_back(cr);
    } catch (const DomainError&) {
      continue;  // numerically degenerate candidate: another one will serve
    }
  }
  std::sort(out.begin(), out.end(), [](const Crossing& a, const Crossing& b) {
    if (a.s1 != b.s1) return a.s1 < b.s1;
    return a.T1 < b.T1;
  });
  return out;
}

void save_generators_json(const GeneratorSet& gs, const std::string& path) {
  nlohmann::json j;
  j["kappa"] = gs.kappa.kappa;
  j["names"] = gs.names;
  auto mats = nlohmann::json::array();
  for (const auto& g : gs.gens) mats.push_back({g.a, g.b, g.c, g.d});
  j["matrices"] = mats;  // row-major, unit determinant
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path);
  f << j.dump(2) << '\n';
}

GeneratorSet load_generators_json(const std::string& path, CurvatureScale k) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path);
  nlohmann::json j;
  f >> j;
  GeneratorSet gs;
  gs.kappa = k;
  if (j.contains("kappa")) gs.kappa.kappa = j["kappa"].get<double>();
  gs.names = j["names"].get<std::vector<std::string>>();
  for (const auto& m : j["matrices"]) {
    if (m.size() != 4) throw std::runtime_error("matrix needs 4 entries");
    // from_entries renormalizes the determinant and rejects det <= 0
    gs.gens.push_back(Isometry::from_entries(m[0].get<double>(), m[1].get<double>(),
                                             m[2].get<double>(), m[3].get<double>()));
  }
  if (gs.names.size() != gs.gens.size())
    throw std::runtime_error("names/matrices size mismatch");
  gs.pingpong_certified = pingpong_certificate(gs.gens, &gs.certificate_margin);
  return gs;
}

}  // namespace hypflow
