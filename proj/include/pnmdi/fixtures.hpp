#pragma once

// Published optimum tables shipped with the library, and a loader for
// coefficient files in the same layout.

#include <string>
#include <string_view>
#include <vector>

#include "pnmdi/fock.hpp"

namespace pnmdi {

enum class FixtureTable {
  table2,  // n_max = 7 coefficients
  table3,  // n_max = 1 coefficients, ideal detectors
  table4,  // TMSV squeezing parameter for n_max = 7
  table5,  // n_max = 1 coefficients, eta = 0.85 and dark count 5e-8
};

struct FixtureRow {
  double distance_km;
  std::vector<double> values;
};

/// distance_km followed by value columns; '#' lines are comments.
struct CoefficientTable {
  std::vector<std::string> columns;  // value column names, without distance_km
  std::vector<FixtureRow> rows;      // ascending distance

  /// Linear interpolation in distance, clamped to the end rows.
  std::vector<double> interpolate(double distance_km) const;
  /// Interpolated row renormalized onto the simplex.
  CoefficientVector coefficients_at(double distance_km) const;
};

CoefficientTable parse_coefficient_csv(std::string_view text);
CoefficientTable load_coefficient_file(const std::string& path);

const CoefficientTable& fixture(FixtureTable table);
/// Resolves "table2", "table3", "table4" or "table5".
FixtureTable fixture_from_name(std::string_view name);
std::string to_string(FixtureTable table);

}  // namespace pnmdi
