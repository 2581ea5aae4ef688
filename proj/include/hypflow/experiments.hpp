#pragma once

// Experiment drivers: deterministic seeded sweeps over the verification
// pipelines, CSV/SVG emission and pass/fail accounting.  The CLI and the
// acceptance suite both run through these entry points.

#include <cstdint>
#include <string>

#include "hypflow/bounds.hpp"

namespace hypflow {

struct ExperimentConfig {
  std::string kind;  // triangles | surface-triangles | partner |
                     // partner-scaling | pseudo | closing | cones |
                     // crossings | constants

  double kappa1 = 1.0;
  double kappa2 = 1.0;
  double t0 = 5.0;
  double inj_radius = 0.025;  // rho = 2 inj; feeds b in the scaling bounds
  std::uint64_t seed = 1;
  double tolerance = 1e-9;
  int samples = 1000;

  // crossing-orbit sweeps
  double T1 = 10.0, T2 = 10.0;
  double eps_min = 1e-3, eps_max = 0.05;
  int grid = 20;
  bool allow_eps_overflow = false;  // permit eps above eps0 (flagged, not fatal)
  double sample_step = 0.05;

  // closing sweeps
  double offset_max = 0.009, tilt_max = 0.01, jitter_max = 0.005;
  double length_min = 8.0, length_max = 12.0;

  // surface runs
  double r_lo = 1.0, r_hi = 2.0;
  double surf_step = 1e-3, surf_r_max = 12.0;

  // cone runs
  int cone_elements = 20, cone_dirs = 1000;

  // crossing detection
  std::string word = "ab";
  double schottky_sep = 4.0, schottky_strength = 3.0;
  int l_cut = 3;

  std::string out_csv;
  std::string out_svg;
};

struct RunSummary {
  long rows = 0;
  long violations = 0;
  bool has_fit = false;
  double fit_slope = 0.0;  // log-log least-squares slope (scaling sweeps)
  double fit_coeff = 0.0;  // fitted coefficient of the power law
  std::string csv_text;
  std::string svg_text;
};

/// Loads a config from a JSON object of optional keys named like the fields.
ExperimentConfig config_from_json(const std::string& path);

/// Runs one experiment; deterministic given the config (including seed).
/// Writes CSV/SVG when paths are set.  Exit-code contract for callers:
/// 0 when violations == 0, 1 otherwise, 2 on invalid configuration.
RunSummary run_experiment(const ExperimentConfig& cfg);

}  // namespace hypflow
