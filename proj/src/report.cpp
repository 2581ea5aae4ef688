#include "hypflow/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace hypflow {

void CheckReport::merge(const CheckReport& other) {
  samples += other.samples;
  violations += other.violations;
  worst_margin = std::min(worst_margin, other.worst_margin);
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

void CsvTable::comment(const std::string& key, const std::string& value) {
  comments_.push_back("# " + key + "=" + value);
}

void CsvTable::comment(const std::string& key, double value) {
  comment(key, format_double(value));
}

void CsvTable::add_row(const std::vector<double>& values) {
  std::vector<std::string> cells;
  cells.reserve(values.size());
  for (double v : values) cells.push_back(format_double(v));
  add_text_row(cells);
}

void CsvTable::add_text_row(const std::vector<std::string>& cells) {
  if (cells.size() != columns_.size())
    throw std::invalid_argument("csv row width mismatch");
  rows_.push_back(cells);
}

std::string CsvTable::to_string() const {
  std::ostringstream out;
  for (const auto& c : comments_) out << c << '\n';
  for (std::size_t i = 0; i < columns_.size(); ++i)
    out << (i ? "," : "") << columns_[i];
  out << '\n';
  for (const auto& row : rows_) {
    for (std::size_t i = 0; i < row.size(); ++i)
      out << (i ? "," : "") << row[i];
    out << '\n';
  }
  return out.str();
}

void CsvTable::write(const std::string& path) const {
  write_file(path, to_string());
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open output file: " + path);
  f << content;
}

namespace {

std::string svg_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  return buf;
}

}  // namespace

std::string scatter_loglog_svg(const std::vector<std::pair<double, double>>& pts,
                               const PlotOptions& opts) {
  if (pts.empty()) throw EmptyInput("plot needs at least one point");

  double lx_min = 1e300, lx_max = -1e300, ly_min = 1e300, ly_max = -1e300;
  for (const auto& [x, y] : pts) {
    if (!(x > 0.0) || !(y > 0.0))
      throw EmptyInput("log-log plot needs positive coordinates");
    lx_min = std::min(lx_min, std::log10(x));
    lx_max = std::max(lx_max, std::log10(x));
    ly_min = std::min(ly_min, std::log10(y));
    ly_max = std::max(ly_max, std::log10(y));
  }
  if (opts.reference) {
    for (const auto& [x, y] : pts) {
      const double ry = std::log10(opts.ref_coeff) +
                        opts.ref_exponent * std::log10(x);
      ly_min = std::min(ly_min, ry);
      ly_max = std::max(ly_max, ry);
    }
  }
  const double pad_x = std::max(0.05 * (lx_max - lx_min), 0.1);
  const double pad_y = std::max(0.05 * (ly_max - ly_min), 0.1);
  lx_min -= pad_x;
  lx_max += pad_x;
  ly_min -= pad_y;
  ly_max += pad_y;

  const double w = 640, h = 480, ml = 70, mr = 20, mt = 36, mb = 50;
  auto px = [&](double lx) {
    return ml + (lx - lx_min) / (lx_max - lx_min) * (w - ml - mr);
  };
  auto py = [&](double ly) {
    return h - mb - (ly - ly_min) / (ly_max - ly_min) * (h - mt - mb);
  };

  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"480\" "
       "viewBox=\"0 0 640 480\">\n"
    << "<rect width=\"640\" height=\"480\" fill=\"white\"/>\n"
    << "<rect x=\"" << svg_num(ml) << "\" y=\"" << svg_num(mt) << "\" width=\""
    << svg_num(w - ml - mr) << "\" height=\"" << svg_num(h - mt - mb)
    << "\" fill=\"none\" stroke=\"#444\"/>\n";

  // decade grid lines and labels
  for (int e = static_cast<int>(std::ceil(lx_min)); e <= std::floor(lx_max); ++e) {
    const double X = px(e);
    s << "<line x1=\"" << svg_num(X) << "\" y1=\"" << svg_num(mt) << "\" x2=\""
      << svg_num(X) << "\" y2=\"" << svg_num(h - mb)
      << "\" stroke=\"#ddd\"/>\n"
      << "<text x=\"" << svg_num(X) << "\" y=\"" << svg_num(h - mb + 16)
      << "\" font-size=\"11\" text-anchor=\"middle\">1e" << e << "</text>\n";
  }
  for (int e = static_cast<int>(std::ceil(ly_min)); e <= std::floor(ly_max); ++e) {
    const double Y = py(e);
    s << "<line x1=\"" << svg_num(ml) << "\" y1=\"" << svg_num(Y) << "\" x2=\""
      << svg_num(w - mr) << "\" y2=\"" << svg_num(Y)
      << "\" stroke=\"#ddd\"/>\n"
      << "<text x=\"" << svg_num(ml - 6) << "\" y=\"" << svg_num(Y + 4)
      << "\" font-size=\"11\" text-anchor=\"end\">1e" << e << "</text>\n";
  }

  if (opts.reference) {
    s << "<polyline fill=\"none\" stroke=\"#c22\" stroke-width=\"1.5\" points=\"";
    const int n = 64;
    for (int i = 0; i <= n; ++i) {
      const double lx = lx_min + (lx_max - lx_min) * i / n;
      const double ly = std::log10(opts.ref_coeff) + opts.ref_exponent * lx;
      s << svg_num(px(lx)) << ',' << svg_num(py(ly)) << ' ';
    }
    s << "\"/>\n";
    if (!opts.ref_label.empty())
      s << "<text x=\"" << svg_num(w - mr - 6) << "\" y=\"" << svg_num(mt + 14)
        << "\" font-size=\"12\" fill=\"#c22\" text-anchor=\"end\">"
        << opts.ref_label << "</text>\n";
  }

  for (const auto& [x, y] : pts)
    s << "<circle cx=\"" << svg_num(px(std::log10(x))) << "\" cy=\""
      << svg_num(py(std::log10(y)))
      << "\" r=\"3\" fill=\"#1b6\" stroke=\"#064\"/>\n";

  s << "<text x=\"" << svg_num(w / 2) << "\" y=\"20\" font-size=\"14\" "
       "text-anchor=\"middle\">" << opts.title << "</text>\n"
    << "<text x=\"" << svg_num(w / 2) << "\" y=\"" << svg_num(h - 12)
    << "\" font-size=\"12\" text-anchor=\"middle\">" << opts.x_label
    << "</text>\n"
    << "<text x=\"16\" y=\"" << svg_num(h / 2)
    << "\" font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
    << svg_num(h / 2) << ")\">" << opts.y_label << "</text>\n"
    << "</svg>\n";
  return s.str();
}

}  // namespace hypflow
