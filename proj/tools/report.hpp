#pragma once

// CSV and SVG emission. Numbers are printed with 12 significant digits so
// that reruns diff cleanly; infinities print as "inf".

#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace pnmdi::cli {

inline constexpr int kCsvSchemaVersion = 1;

std::string fmt(double v);

class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& os) : os_(os) {}
  void meta(const std::string& key, const std::string& value);
  void header(const std::vector<std::string>& columns);
  void row(const std::vector<std::string>& cells);

 private:
  std::ostream& os_;
};

struct Series {
  std::string name;
  std::vector<std::pair<double, double>> points;  // (distance, rate)
  std::string colour;
  bool dashed = false;
};

/// Log-scale rate against distance. Non-positive and infinite values are skipped.
void write_svg_plot(std::ostream& os, const std::string& title, const std::vector<Series>& series);

/// Reads "distance_km,<value>" rows from a user-supplied reference curve.
Series read_overlay(const std::string& path);

}  // namespace pnmdi::cli
