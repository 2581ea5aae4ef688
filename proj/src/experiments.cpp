#include "hypflow/experiments.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cctype>
#include <cmath>
#include <fstream>
#include <functional>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <thread>
#include <vector>

#include "json.hpp"

#include "hypflow/comparison.hpp"
#include "hypflow/groups.hpp"
#include "hypflow/orbits.hpp"
#include "hypflow/report.hpp"
#include "hypflow/rng.hpp"
#include "hypflow/surface.hpp"

namespace hypflow {

namespace {

void parallel_for(int n, const std::function<void(int)>& fn) {
  unsigned nt = std::thread::hardware_concurrency();
  nt = std::min(nt == 0 ? 1u : nt, 8u);
  if (nt <= 1 || n < 8) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::atomic<bool> failed{false};
  std::string first_error;
  std::mutex err_mx;
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < nt; ++t)
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
        if (failed.load()) return;
        try {
          fn(i);
        } catch (const std::exception& e) {
          std::scoped_lock lk(err_mx);
          if (!failed.exchange(true)) first_error = e.what();
        }
      }
    });
  for (auto& th : pool) th.join();
  if (failed.load()) throw std::runtime_error(first_error);
}

void add_constants_header(CsvTable& csv, const ExperimentConfig& cfg,
                          const BoundConstants& bc) {
  csv.comment("tool", std::string("hypflow ") + tool_version);
  csv.comment("kind", cfg.kind);
  csv.comment("seed", static_cast<double>(cfg.seed));
  csv.comment("tolerance", cfg.tolerance);
  csv.comment("sample_step", cfg.sample_step);
  csv.comment("kappa1", bc.kappa1);
  csv.comment("kappa2", bc.kappa2);
  csv.comment("theta0", bc.theta0);
  csv.comment("theta0_proof", bc.theta0_proof);
  csv.comment("eps0", bc.eps0);
  csv.comment("delta0", bc.delta0);
  csv.comment("C_main", bc.C_main);
  csv.comment("C_intro", bc.C_intro);
  csv.comment("C_tilde", bc.C_tilde);
  csv.comment("rho_coeff", bc.rho_coeff);
  csv.comment("partner_len_coeff", bc.partner_len_coeff);
  csv.comment("partner_dist_coeff", bc.partner_dist_coeff);
  csv.comment("pseudo_len_coeff", bc.pseudo_len_coeff);
  csv.comment("pseudo_dist_coeff", bc.pseudo_dist_coeff);
  csv.comment("pseudo_gap_coeff", bc.pseudo_gap_coeff);
  csv.comment("t0", bc.t0);
  csv.comment("rho", bc.rho);
  csv.comment("b_inj", bc.b_inj);
  csv.comment("D_num", bc.D_num);
}

std::vector<double> log_grid(double lo, double hi, int n) {
  std::vector<double> g(n);
  for (int i = 0; i < n; ++i)
    g[i] = (n == 1) ? lo
                    : std::exp(std::log(lo) +
                               (std::log(hi) - std::log(lo)) * i / (n - 1));
  return g;
}

struct Fit {
  double slope = 0, coeff = 0;
};

Fit loglog_fit(const std::vector<std::pair<double, double>>& pts) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(pts.size());
  for (const auto& [x, y] : pts) {
    const double lx = std::log(x), ly = std::log(y);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  Fit f;
  f.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  f.coeff = std::exp((sy - f.slope * sx) / n);
  return f;
}

TriangleSample random_constant_triangle(Rng& rng, double kappa,
                                        bool right_angle) {
  TriangleSample t;
  t.l1 = rng.uniform(0.1, 10.0);
  t.l2 = rng.uniform(0.1, 10.0);
  t.a3 = right_angle ? half_pi : rng.uniform(0.05, pi - 0.1);
  t.l3 = solve_side_constant(t.l1, t.l2, t.a3, kappa);
  t.a1 = solve_angle_constant(t.l2, t.l3, t.l1, kappa);
  t.a2 = solve_angle_constant(t.l1, t.l3, t.l2, kappa);
  t.source = TriangleSource::Constant;
  t.kappa1 = t.kappa2 = kappa;
  return t;
}

void append_check_rows(CsvTable& csv, const std::vector<CheckReport>& reps,
                       long& violations) {
  for (const auto& r : reps) {
    if (r.samples == 0) continue;
    csv.add_text_row({r.name, std::to_string(r.samples),
                      std::to_string(r.violations),
                      format_double(r.worst_margin),
                      format_double(r.tolerance)});
    violations += r.violations;
  }
}

RunSummary run_triangles(const ExperimentConfig& cfg) {
  const BoundConstants bc =
      make_constants({cfg.kappa1, cfg.kappa2}, cfg.t0, cfg.inj_radius);
  const double kappa = cfg.kappa1;  // constant-curvature suite runs at kappa1
  std::vector<TriangleSample> samples(cfg.samples);
  for (int i = 0; i < cfg.samples; ++i) {
    Rng rng(cfg.seed, static_cast<std::uint64_t>(i));
    samples[i] = random_constant_triangle(rng, kappa, i % 2 == 0);
  }
  const auto reps =
      check_triangle_laws(samples, {kappa, kappa}, cfg.tolerance);

  RunSummary s;
  CsvTable csv({"check", "samples", "violations", "worst_margin", "tolerance"});
  add_constants_header(csv, cfg, bc);
  append_check_rows(csv, reps, s.violations);
  s.rows = static_cast<long>(csv.rows());
  s.csv_text = csv.to_string();
  return s;
}

RunSummary run_surface_triangles(const ExperimentConfig& cfg) {
  const CurvatureProfile prof{cfg.kappa1, cfg.kappa2, cfg.r_lo, cfg.r_hi};
  const WarpTable table = build_surface(prof, cfg.surf_step, cfg.surf_r_max);
  const CurvatureBounds cb = table.extracted_bounds();
  const BoundConstants bc = make_constants(cb, cfg.t0, cfg.inj_radius);

  const int n = cfg.samples;
  const int n_generic = (n * 6) / 10;
  const int n_right = (n * 2) / 10;
  const int n_corollary = n - n_generic - n_right;

  std::vector<TriangleSample> tris(n_generic + n_right);
  std::vector<std::optional<std::pair<CorollaryMeasurement, std::array<double, 3>>>>
      cors(n_corollary);  // measurement + (eps, R1, R2)

  parallel_for(n_generic, [&](int i) {
    tris[i] = sample_triangle(cfg.seed + 1000 + i, table);
  });
  parallel_for(n_right, [&](int i) {
    Rng rng(cfg.seed, 0xA000 + i);
    const SurfacePoint apex{rng.uniform(0.8, 2.6), rng.uniform(0.0, two_pi)};
    tris[n_generic + i] = build_right_triangle_surface(
        apex, rng.uniform(0.0, two_pi), rng.uniform(0.5, 2.5),
        rng.uniform(0.5, 2.5), table);
  });
  parallel_for(n_corollary, [&](int i) {
    Rng rng(cfg.seed, 0xB000 + i);
    const SurfacePoint apex{rng.uniform(0.8, 2.2), rng.uniform(0.0, two_pi)};
    const double eps = rng.uniform(0.1, 0.6);
    const double a3 = pi - rng.uniform(0.3, 0.95) * eps;
    const double R1 = rng.uniform(1.2, 2.0), R2 = rng.uniform(1.2, 2.0);
    const double l1 = R1 + rng.uniform(0.0, 1.2);
    const double l2 = R2 + rng.uniform(0.0, 1.2);
    cors[i] = std::make_pair(
        build_corollary_surface(apex, rng.uniform(0.0, two_pi), a3, l1, l2,
                                table, 4),
        std::array<double, 3>{eps, R1, R2});
  });

  auto reps = check_triangle_laws(tris, cb, cfg.tolerance);
  CheckReport cor_dist{"corollary-dist-to-c3", 0, 0, 1e300, cfg.tolerance};
  CheckReport cor_sum{"corollary-side-sum", 0, 0, 1e300, cfg.tolerance};
  CheckReport cor_sin{"corollary-sin", 0, 0, 1e300, cfg.tolerance};
  for (const auto& c : cors) {
    const auto& [m, par] = *c;
    const CorollaryMargins cm =
        corollary_margins(m, par[0], par[1], par[2], cb.kappa1);
    cor_dist.absorb(cm.dist_to_c3);
    cor_sum.absorb(cm.side_sum);
    cor_sin.absorb(cm.sin1);
    cor_sin.absorb(cm.sin2);
  }
  reps.push_back(cor_dist);
  reps.push_back(cor_sum);
  reps.push_back(cor_sin);

  RunSummary s;
  CsvTable csv({"check", "samples", "violations", "worst_margin", "tolerance"});
  add_constants_header(csv, cfg, bc);
  csv.comment("surf_step", cfg.surf_step);
  csv.comment("r_lo", cfg.r_lo);
  csv.comment("r_hi", cfg.r_hi);
  append_check_rows(csv, reps, s.violations);
  s.rows = static_cast<long>(csv.rows());
  s.csv_text = csv.to_string();
  return s;
}

bool partner_row_ok(const PartnerResult& r, double tol) {
  return r.len_margin >= -tol && r.dist_margin >= -tol && r.strict_shorter &&
         r.that_margin >= -tol && r.midpoint_margin1 >= -tol &&
         r.midpoint_margin2 >= -tol;
}

RunSummary run_partner(const ExperimentConfig& cfg, bool scaling) {
  const CurvatureScale k{cfg.kappa1};
  const BoundConstants bc =
      make_constants({cfg.kappa1, cfg.kappa2}, cfg.t0, cfg.inj_radius);

  std::vector<double> eps_list;
  std::vector<std::pair<double, double>> T_list;
  if (scaling) {
    eps_list = log_grid(cfg.eps_min, cfg.eps_max, cfg.grid);
    T_list.assign(eps_list.size(), {cfg.T1, cfg.T2});
  } else {
    for (int i = 0; i < cfg.samples; ++i) {
      Rng rng(cfg.seed, static_cast<std::uint64_t>(i));
      eps_list.push_back(
          rng.log_uniform(cfg.eps_min, std::min(cfg.eps_max, bc.eps0)));
      T_list.push_back({rng.uniform(cfg.t0, cfg.t0 + 8.0),
                        rng.uniform(cfg.t0, cfg.t0 + 8.0)});
    }
  }
  for (double e : eps_list)
    if (e > bc.eps0 && !cfg.allow_eps_overflow)
      throw DomainError("eps grid exceeds eps0; pass the override to allow");

  RunSummary s;
  CsvTable csv({"kappa1", "kappa2", "T1", "T2", "eps", "T", "T_hat", "T_prime",
                "T3", "dist_sup", "bound_len", "bound_dist", "len_margin",
                "dist_margin", "that_margin", "mid_margin1", "mid_margin2",
                "pass"});
  add_constants_header(csv, cfg, bc);

  std::vector<std::pair<double, double>> scatter;
  for (std::size_t i = 0; i < eps_list.size(); ++i) {
    const double eps = eps_list[i];
    const auto cg = synthesize_crossed_geodesic(
        T_list[i].first, T_list[i].second, eps, CrossingMode::Partner, k, bc);
    const PartnerResult r = construct_partner(cg, bc, cfg.sample_step);
    const bool ok = partner_row_ok(r, cfg.tolerance);
    if (!ok) ++s.violations;
    csv.add_row({cfg.kappa1, cfg.kappa2, T_list[i].first, T_list[i].second,
                 eps, r.T, r.T_hat, r.T_prime, r.T3, r.dist_sup, r.bound_len,
                 r.bound_dist, r.len_margin, r.dist_margin, r.that_margin,
                 r.midpoint_margin1, r.midpoint_margin2, ok ? 1.0 : 0.0});
    scatter.push_back({eps, r.T - r.T_prime});
  }
  s.rows = static_cast<long>(csv.rows());

  if (scaling) {
    const Fit f = loglog_fit(scatter);
    s.has_fit = true;
    s.fit_slope = f.slope;
    s.fit_coeff = f.coeff;
    csv.comment("fit_slope", f.slope);
    csv.comment("fit_coeff", f.coeff);
    if (!cfg.out_svg.empty()) {
      PlotOptions po;
      po.title = "partner action difference vs crossing angle";
      po.x_label = "eps";
      po.y_label = "T - T'";
      po.reference = true;
      po.ref_coeff = f.coeff;
      po.ref_exponent = 2.0;
      po.ref_label = "slope-2 reference";
      s.svg_text = scatter_loglog_svg(scatter, po);
    }
  }
  s.csv_text = csv.to_string();
  return s;
}

RunSummary run_pseudo(const ExperimentConfig& cfg) {
  const CurvatureScale k{cfg.kappa1};
  const BoundConstants bc =
      make_constants({cfg.kappa1, cfg.kappa2}, cfg.t0, cfg.inj_radius);
  const auto grid = log_grid(cfg.eps_min, cfg.eps_max, cfg.grid);

  RunSummary s;
  CsvTable csv({"kappa1", "kappa2", "T1", "T2", "eps", "That1", "That2",
                "dist_sup1", "dist_sup2", "endpoint_gap", "bound_len",
                "bound_dist", "bound_gap", "len_margin", "dist_margin",
                "gap_margin", "mid_margin1", "mid_margin2", "pass"});
  add_constants_header(csv, cfg, bc);

  for (double eps : grid) {
    const auto cg = synthesize_crossed_geodesic(cfg.T1, cfg.T2, eps,
                                                CrossingMode::Pseudo, k, bc);
    const PseudoPartnerResult r =
        construct_pseudo_partner(cg, bc, cfg.sample_step);
    const bool ok = r.len_margin >= -cfg.tolerance &&
                    r.dist_margin >= -cfg.tolerance &&
                    r.gap_margin >= -cfg.tolerance &&
                    r.nonneg_margin >= -cfg.tolerance &&
                    r.midpoint_margin1 >= -cfg.tolerance &&
                    r.midpoint_margin2 >= -cfg.tolerance;
    if (!ok) ++s.violations;
    csv.add_row({cfg.kappa1, cfg.kappa2, cfg.T1, cfg.T2, eps, r.That1, r.That2,
                 r.dist_sup1, r.dist_sup2, r.endpoint_gap, r.bound_len,
                 r.bound_dist, r.bound_gap, r.len_margin, r.dist_margin,
                 r.gap_margin, r.midpoint_margin1, r.midpoint_margin2,
                 ok ? 1.0 : 0.0});
  }
  s.rows = static_cast<long>(csv.rows());
  s.csv_text = csv.to_string();
  return s;
}

struct ClosingRow {
  double length = 0, offset = 0, tilt = 0, jitter = 0;
  bool foot = false;
  ClosingResult res;
};

RunSummary run_closing(const ExperimentConfig& cfg) {
  const CurvatureScale k{cfg.kappa1};
  const BoundConstants bc =
      make_constants({cfg.kappa1, cfg.kappa2}, cfg.t0, cfg.inj_radius);

  std::vector<ClosingRow> rows(cfg.samples);
  parallel_for(cfg.samples, [&](int i) {
    Rng rng(cfg.seed, static_cast<std::uint64_t>(i));
    ClosingRow row;
    for (int attempt = 0;; ++attempt) {
      if (attempt > 200) throw NoConvergence("no admissible closing sample");
      const double len = rng.uniform(cfg.length_min, cfg.length_max);
      const Isometry conj =
          isometry_from_frames(UnitTangent{origin(), half_pi},
                               UnitTangent{PointUHP{rng.uniform(-1.0, 1.0),
                                                    rng.uniform(0.7, 1.4)},
                                            rng.uniform(0.0, two_pi)});
      const Isometry g =
          conj *
          translation_along(BoundaryPoint::finite(0.0), BoundaryPoint::infinity(),
                            len, k) *
          conj.inverse();
      row.length = translation_length(g, k);
      row.foot = (i % 3 == 2);
      try {
        if (row.foot) {
          row.offset = rng.uniform(0.0, cfg.offset_max);
          row.tilt = 0.0;
          row.jitter = 0.0;
          const LoopRecurrent lr = synthesize_loop_recurrent(g, row.offset, k);
          if (lr.delta > bc.delta0) continue;
          row.res = close_orbit(lr.w, lr.T, g, bc, k, cfg.sample_step);
        } else {
          row.offset = rng.uniform(0.0, cfg.offset_max);
          row.jitter = rng.uniform(-cfg.jitter_max, cfg.jitter_max);
          const double T = row.length + row.jitter;
          // aim the tilt at the attracting endpoint, then perturb inside the
          // admissible sliver: the unstable deviation is amplified by e^T
          const GeodesicLine ax = axis(g, k);
          UnitTangent w0 = ax.base;
          if (row.offset != 0.0) {
            const UnitTangent nrm = rotate(ax.base, half_pi);
            w0 = isometry_from_frames(nrm, geodesic_flow(nrm, row.offset, k))
                     .apply(ax.base);
          }
          const double aim = wrap_angle(
              direction_to_boundary(w0.base, ax.pos) - w0.dir + pi) - pi;
          const double band = bc.delta0 * 0.2 * std::exp(-(T + 1.0));
          row.tilt = aim + rng.uniform(-band, band);
          if (std::fabs(row.tilt) > cfg.tilt_max) continue;
          const RecurrentVector rv =
              synthesize_recurrent(g, row.offset, row.tilt, T, k, bc.delta0);
          row.res = close_orbit(rv.w, T, g, bc, k, cfg.sample_step);
        }
      } catch (const DeltaTooLarge&) {
        continue;
      } catch (const HypothesisViolated&) {
        continue;
      }
      break;
    }
    rows[i] = row;
  });

  RunSummary s;
  CsvTable csv({"kappa1", "kappa2", "length", "offset", "tilt", "T", "delta",
                "T_prime", "shadow_sup", "bound_len", "bound_shadow",
                "len_margin", "shadow_margin", "foot_case", "foot_len_margin",
                "foot_shadow_margin", "pass"});
  add_constants_header(csv, cfg, bc);
  std::vector<std::pair<double, double>> scatter;
  for (const auto& row : rows) {
    const ClosingResult& r = row.res;
    bool ok = r.len_margin >= -cfg.tolerance && r.shadow_margin >= -cfg.tolerance;
    if (r.foot_case)
      ok = ok && r.foot_len_margin >= -cfg.tolerance &&
           r.foot_shadow_margin >= -cfg.tolerance && r.foot_strict;
    if (!ok) ++s.violations;
    csv.add_row({cfg.kappa1, cfg.kappa2, row.length, row.offset, row.tilt, r.T,
                 r.delta, r.T_prime, r.shadow_sup, r.bound_len, r.bound_shadow,
                 r.len_margin, r.shadow_margin, r.foot_case ? 1.0 : 0.0,
                 r.foot_len_margin, r.foot_shadow_margin, ok ? 1.0 : 0.0});
    if (r.delta > 0 && std::fabs(r.T - r.T_prime) > 0)
      scatter.push_back({r.delta, std::fabs(r.T - r.T_prime)});
  }
  s.rows = static_cast<long>(csv.rows());
  if (!cfg.out_svg.empty() && !scatter.empty()) {
    PlotOptions po;
    po.title = "closing: action difference vs recurrence defect";
    po.x_label = "delta";
    po.y_label = "|T - T'|";
    po.reference = true;
    po.ref_coeff = 2.0 * bc.C_main;
    po.ref_exponent = 1.0;
    po.ref_label = "bound 2 C delta";
    s.svg_text = scatter_loglog_svg(scatter, po);
  }
  s.csv_text = csv.to_string();
  return s;
}

RunSummary run_cones(const ExperimentConfig& cfg) {
  const CurvatureScale k{cfg.kappa1};
  const BoundConstants bc =
      make_constants({cfg.kappa1, cfg.kappa2}, cfg.t0, cfg.inj_radius);

  RunSummary s;
  CsvTable csv({"T1", "T2", "eps", "theta", "t", "samples", "violations",
                "worst_margin"});
  add_constants_header(csv, cfg, bc);
  for (int i = 0; i < cfg.cone_elements; ++i) {
    Rng rng(cfg.seed, 0xC000 + static_cast<std::uint64_t>(i));
    const double eps =
        rng.log_uniform(1e-3, std::min(bc.eps0, bc.theta0 / 2.0));
    const double T1 = rng.uniform(cfg.t0, cfg.t0 + 7.0);
    const double T2 = rng.uniform(cfg.t0, cfg.t0 + 7.0);
    const auto cg =
        synthesize_crossed_geodesic(T1, T2, eps, CrossingMode::Partner, k, bc);
    const Isometry h = cg.g2.inverse() * cg.g1;
    const double theta = 2.0 * eps;
    const double t = distance(cg.v0.base, h.apply(cg.v0.base), k);  // T_hat
    const CheckReport rep = check_cone_contraction(
        h, cg.v0, theta, t, cfg.cone_dirs, bc, k, cfg.seed + i);
    s.violations += rep.violations;
    csv.add_row({T1, T2, eps, theta, t, static_cast<double>(rep.samples),
                 static_cast<double>(rep.violations), rep.worst_margin});
  }
  s.rows = static_cast<long>(csv.rows());
  s.csv_text = csv.to_string();
  return s;
}

Word parse_word(const std::string& text, const GeneratorSet& gs) {
  Word w;
  for (char ch : text) {
    const char low = static_cast<char>(std::tolower(ch));
    bool found = false;
    for (std::size_t i = 0; i < gs.names.size(); ++i)
      if (gs.names[i] == std::string(1, low)) {
        w.letters.push_back(std::isupper(ch) ? -(static_cast<int>(i) + 1)
                                             : static_cast<int>(i) + 1);
        found = true;
        break;
      }
    if (!found) throw DomainError(std::string("unknown generator letter: ") + ch);
  }
  return w;
}

RunSummary run_crossings(const ExperimentConfig& cfg) {
  const CurvatureScale k{cfg.kappa1};
  const BoundConstants bc =
      make_constants({cfg.kappa1, cfg.kappa2}, cfg.t0, cfg.inj_radius);
  const GeneratorSet gs =
      schottky_generators(cfg.schottky_sep, cfg.schottky_strength, k);
  const Word w = parse_word(cfg.word, gs);
  const Isometry gamma = word_matrix(w, gs);
  const double T = translation_length(gamma, k);
  const auto crossings = detect_crossings(w, gs, cfg.l_cut, k);

  RunSummary s;
  CsvTable csv({"word", "T", "T1", "T2", "eps", "s0", "s1", "eta",
                "verified", "len_margin", "dist_margin"});
  add_constants_header(csv, cfg, bc);
  csv.comment("certificate_margin", gs.certificate_margin);
  for (const auto& cr : crossings) {
    double verified = 0.0, len_margin = 0.0, dist_margin = 0.0;
    const double T2 = T - cr.T1;
    if (cr.eps <= bc.eps0 && cr.T1 >= bc.t0 && T2 >= bc.t0) {
      // rebuild the crossing from the actual deck elements at that point
      const GeodesicLine A = axis(gamma, k);
      CrossedGeodesic cg;
      cg.kappa = k;
      cg.v0 = geodesic_flow(A.base, cr.s1, k);
      cg.T1 = cr.T1;
      cg.T2 = T2;
      cg.eps = cr.eps;
      cg.mode = CrossingMode::Partner;
      cg.g1 = word_matrix(cr.eta, gs);
      cg.g = gamma;
      cg.g2 = gamma * cg.g1.inverse();
      const PartnerResult pr = construct_partner(cg, bc, cfg.sample_step);
      verified = partner_row_ok(pr, cfg.tolerance) ? 1.0 : 0.0;
      len_margin = pr.len_margin;
      dist_margin = pr.dist_margin;
      if (verified == 0.0) ++s.violations;
    }
    csv.add_text_row({word_to_string(w, gs), format_double(T),
                      format_double(cr.T1), format_double(T2),
                      format_double(cr.eps), format_double(cr.s0),
                      format_double(cr.s1), word_to_string(cr.eta, gs),
                      format_double(verified), format_double(len_margin),
                      format_double(dist_margin)});
  }
  s.rows = static_cast<long>(csv.rows());
  s.csv_text = csv.to_string();
  return s;
}

RunSummary run_constants(const ExperimentConfig& cfg) {
  const BoundConstants bc =
      make_constants({cfg.kappa1, cfg.kappa2}, cfg.t0, cfg.inj_radius);
  RunSummary s;
  CsvTable csv({"name", "value"});
  add_constants_header(csv, cfg, bc);
  const std::pair<const char*, double> entries[] = {
      {"kappa1", bc.kappa1},
      {"kappa2", bc.kappa2},
      {"theta0", bc.theta0},
      {"theta0_proof", bc.theta0_proof},
      {"eps0", bc.eps0},
      {"delta0", bc.delta0},
      {"C_main", bc.C_main},
      {"C_intro", bc.C_intro},
      {"C_tilde", bc.C_tilde},
      {"rho_coeff", bc.rho_coeff},
      {"partner_len_coeff", bc.partner_len_coeff},
      {"partner_dist_coeff", bc.partner_dist_coeff},
      {"pseudo_len_coeff", bc.pseudo_len_coeff},
      {"pseudo_dist_coeff", bc.pseudo_dist_coeff},
      {"pseudo_gap_coeff", bc.pseudo_gap_coeff},
      {"t0", bc.t0},
      {"rho", bc.rho},
      {"b_inj", bc.b_inj},
      {"D_num", bc.D_num},
  };
  for (const auto& [name, value] : entries)
    csv.add_text_row({name, format_double(value)});
  s.rows = static_cast<long>(csv.rows());
  s.csv_text = csv.to_string();
  return s;
}

}  // namespace

ExperimentConfig config_from_json(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open config: " + path);
  nlohmann::json j;
  f >> j;
  ExperimentConfig c;
  auto get = [&](const char* key, auto& field) {
    if (j.contains(key)) field = j[key].get<std::decay_t<decltype(field)>>();
  };
  get("kind", c.kind);
  get("kappa1", c.kappa1);
  get("kappa2", c.kappa2);
  get("t0", c.t0);
  get("inj_radius", c.inj_radius);
  get("seed", c.seed);
  get("tolerance", c.tolerance);
  get("samples", c.samples);
  get("T1", c.T1);
  get("T2", c.T2);
  get("eps_min", c.eps_min);
  get("eps_max", c.eps_max);
  get("grid", c.grid);
  get("allow_eps_overflow", c.allow_eps_overflow);
  get("sample_step", c.sample_step);
  get("offset_max", c.offset_max);
  get("tilt_max", c.tilt_max);
  get("jitter_max", c.jitter_max);
  get("length_min", c.length_min);
  get("length_max", c.length_max);
  get("r_lo", c.r_lo);
  get("r_hi", c.r_hi);
  get("surf_step", c.surf_step);
  get("surf_r_max", c.surf_r_max);
  get("cone_elements", c.cone_elements);
  get("cone_dirs", c.cone_dirs);
  get("word", c.word);
  get("schottky_sep", c.schottky_sep);
  get("schottky_strength", c.schottky_strength);
  get("l_cut", c.l_cut);
  get("out_csv", c.out_csv);
  get("out_svg", c.out_svg);
  return c;
}

RunSummary run_experiment(const ExperimentConfig& cfg) {
  if (!(cfg.kappa1 > 0) || cfg.kappa2 < cfg.kappa1)
    throw DomainError("need 0 < kappa1 <= kappa2");
  RunSummary s;
  if (cfg.kind == "triangles")
    s = run_triangles(cfg);
  else if (cfg.kind == "surface-triangles")
    s = run_surface_triangles(cfg);
  else if (cfg.kind == "partner")
    s = run_partner(cfg, false);
  else if (cfg.kind == "partner-scaling")
    s = run_partner(cfg, true);
  else if (cfg.kind == "pseudo")
    s = run_pseudo(cfg);
  else if (cfg.kind == "closing")
    s = run_closing(cfg);
  else if (cfg.kind == "cones")
    s = run_cones(cfg);
  else if (cfg.kind == "crossings")
    s = run_crossings(cfg);
  else if (cfg.kind == "constants")
    s = run_constants(cfg);
  else
    throw DomainError("unknown experiment kind: " + cfg.kind);

  if (!cfg.out_csv.empty()) write_file(cfg.out_csv, s.csv_text);
  if (!cfg.out_svg.empty() && !s.svg_text.empty())
    write_file(cfg.out_svg, s.svg_text);
  return s;
}

}  // namespace hypflow
