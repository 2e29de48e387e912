#include "report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "pnmdi/errors.hpp"

namespace pnmdi::cli {

std::string fmt(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v == 0.0 ? 0.0 : v);  // no "-0"
  return buf;
}

void CsvWriter::meta(const std::string& key, const std::string& value) { os_ << "# " << key << ": " << value << '\n'; }

void CsvWriter::header(const std::vector<std::string>& columns) { row(columns); }

void CsvWriter::row(const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) os_ << (i ? "," : "") << cells[i];
  os_ << '\n';
}

namespace {

constexpr double kWidth = 720, kHeight = 480, kLeft = 70, kRight = 160, kTop = 40, kBottom = 50;

}  // namespace

void write_svg_plot(std::ostream& os, const std::string& title, const std::vector<Series>& series) {
  double x_lo = std::numeric_limits<double>::infinity(), x_hi = -x_lo;
  double y_lo = x_lo, y_hi = -x_lo;
  for (const auto& s : series) {
    for (auto [x, y] : s.points) {
      if (!(y > 0.0) || std::isinf(y)) continue;
      x_lo = std::min(x_lo, x);
      x_hi = std::max(x_hi, x);
      y_lo = std::min(y_lo, std::log10(y));
      y_hi = std::max(y_hi, std::log10(y));
    }
  }
  if (!(x_hi > x_lo)) {
    x_lo = 0.0;
    x_hi = std::max(1.0, x_hi);
  }
  if (!(y_hi > y_lo)) {
    y_lo = -1.0;
    y_hi = 1.0;
  }
  y_lo = std::floor(y_lo);
  y_hi = std::ceil(y_hi);
  const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
  auto px = [&](double x) { return kLeft + (x - x_lo) / (x_hi - x_lo) * pw; };
  auto py = [&](double ly) { return kTop + (y_hi - ly) / (y_hi - y_lo) * ph; };

  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
     << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << kLeft << "\" y=\"24\" font-size=\"14\">" << title << "</text>\n";
  os << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw << "\" height=\"" << ph
     << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int e = int(y_lo); e <= int(y_hi); ++e) {
    os << "<line x1=\"" << kLeft << "\" x2=\"" << kLeft + pw << "\" y1=\"" << fmt(py(e)) << "\" y2=\"" << fmt(py(e))
       << "\" stroke=\"#ddd\"/>\n";
    os << "<text x=\"" << kLeft - 8 << "\" y=\"" << fmt(py(e) + 4) << "\" text-anchor=\"end\">1e" << e << "</text>\n";
  }
  for (int i = 0; i <= 5; ++i) {
    const double x = x_lo + (x_hi - x_lo) * i / 5.0;
    os << "<text x=\"" << fmt(px(x)) << "\" y=\"" << kTop + ph + 18 << "\" text-anchor=\"middle\">" << fmt(x)
       << "</text>\n";
  }
  os << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << kHeight - 12 << "\" text-anchor=\"middle\">distance (km)</text>\n";
  os << "<text transform=\"translate(18," << kTop + ph / 2
     << ") rotate(-90)\" text-anchor=\"middle\">rate (bits per use)</text>\n";

  double legend_y = kTop + 10;
  for (const auto& s : series) {
    std::ostringstream path;
    bool pen_down = false;
    for (auto [x, y] : s.points) {
      if (!(y > 0.0) || std::isinf(y)) {
        pen_down = false;
        continue;
      }
      path << (pen_down ? " L " : " M ") << fmt(px(x)) << ' ' << fmt(py(std::log10(y)));
      pen_down = true;
    }
    os << "<path d=\"" << path.str() << "\" fill=\"none\" stroke=\"" << s.colour << "\" stroke-width=\"1.5\""
       << (s.dashed ? " stroke-dasharray=\"6 4\"" : "") << "/>\n";
    os << "<line x1=\"" << kLeft + pw + 10 << "\" x2=\"" << kLeft + pw + 34 << "\" y1=\"" << legend_y << "\" y2=\""
       << legend_y << "\" stroke=\"" << s.colour << "\"" << (s.dashed ? " stroke-dasharray=\"6 4\"" : "") << "/>\n";
    os << "<text x=\"" << kLeft + pw + 40 << "\" y=\"" << legend_y + 4 << "\">" << s.name << "</text>\n";
    legend_y += 18;
  }
  os << "</svg>\n";
}

Series read_overlay(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open overlay file: " + path);
  Series s;
  const auto slash = path.find_last_of('/');
  s.name = slash == std::string::npos ? path : path.substr(slash + 1);
  s.colour = "#7f7f7f";
  s.dashed = true;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    double x = 0.0, y = 0.0;
    char comma = 0;
    // header or malformed lines are skipped
    if (ls >> x >> comma >> y && comma == ',') s.points.emplace_back(x, y);
  }
  if (s.points.empty()) throw DomainError("overlay file has no data rows: " + path);
  return s;
}

}  // namespace pnmdi::cli
