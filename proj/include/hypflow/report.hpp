#pragma once

// Margin bookkeeping for inequality sweeps plus the CSV / SVG emitters.
// A check passes when margin >= -tolerance, so equality cases count as
// passes; worst_margin is the minimum margin seen.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace hypflow {

struct EmptyInput : std::invalid_argument {
  explicit EmptyInput(const std::string& what) : std::invalid_argument(what) {}
};

struct CheckReport {
  std::string name;
  long samples = 0;
  long violations = 0;
  double worst_margin = 1e300;
  double tolerance = 1e-9;

  void absorb(double margin) {
    ++samples;
    if (margin < -tolerance) ++violations;
    if (margin < worst_margin) worst_margin = margin;
  }
  void merge(const CheckReport& other);
  bool passed() const { return violations == 0; }
};

std::string format_double(double v);

/// Column-oriented CSV with '#' comment header lines.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> columns)
      : columns_(std::move(columns)) {}

  void comment(const std::string& key, const std::string& value);
  void comment(const std::string& key, double value);
  void add_row(const std::vector<double>& values);
  void add_text_row(const std::vector<std::string>& cells);

  std::size_t rows() const { return rows_.size(); }
  std::string to_string() const;
  void write(const std::string& path) const;

 private:
  std::vector<std::string> comments_;
  std::vector<std::string> columns_;
  std::vector<std::vector<std::string>> rows_;
};

/// Log-log scatter with an optional reference power law y = coeff * x^exponent.
/// Self-contained SVG, no external assets, no timestamps.
struct PlotOptions {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool reference = false;
  double ref_coeff = 1.0;
  double ref_exponent = 2.0;
  std::string ref_label;
};

std::string scatter_loglog_svg(const std::vector<std::pair<double, double>>& pts,
                               const PlotOptions& opts);

void write_file(const std::string& path, const std::string& content);

inline constexpr const char* tool_version = "0.1.0";

}  // namespace hypflow
