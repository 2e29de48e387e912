#include "pnmdi/fixtures.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "fixture_data.hpp"
#include "pnmdi/errors.hpp"

namespace pnmdi {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

double to_double(std::string_view s, std::size_t line_no) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw DomainError("line " + std::to_string(line_no) + ": not a number: '" + std::string(s) + "'");
  }
  return v;
}

}  // namespace

std::vector<double> CoefficientTable::interpolate(double distance_km) const {
  if (rows.empty()) throw DomainError("empty coefficient table");
  if (distance_km <= rows.front().distance_km) return rows.front().values;
  if (distance_km >= rows.back().distance_km) return rows.back().values;
  const auto hi = std::upper_bound(rows.begin(), rows.end(), distance_km,
                                   [](double d, const FixtureRow& r) { return d < r.distance_km; });
  const auto lo = hi - 1;
  const double t = (distance_km - lo->distance_km) / (hi->distance_km - lo->distance_km);
  std::vector<double> v(lo->values.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = (1.0 - t) * lo->values[i] + t * hi->values[i];
  return v;
}

CoefficientVector CoefficientTable::coefficients_at(double distance_km) const {
  return CoefficientVector::normalized(interpolate(distance_km));
}

CoefficientTable parse_coefficient_csv(std::string_view text) {
  CoefficientTable table;
  bool header = false;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    const std::string_view line = trim(text.substr(0, nl));
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    const auto cells = split(line);
    if (!header) {
      if (cells.size() < 2 || cells[0] != "distance_km") {
        throw DomainError("coefficient table header must start with distance_km");
      }
      for (std::size_t i = 1; i < cells.size(); ++i) table.columns.emplace_back(cells[i]);
      header = true;
      continue;
    }
    if (cells.size() != table.columns.size() + 1) {
      throw DomainError("line " + std::to_string(line_no) + ": expected " +
                        std::to_string(table.columns.size() + 1) + " fields");
    }
    FixtureRow row{to_double(cells[0], line_no), {}};
    for (std::size_t i = 1; i < cells.size(); ++i) row.values.push_back(to_double(cells[i], line_no));
    if (!table.rows.empty() && row.distance_km <= table.rows.back().distance_km) {
      throw DomainError("line " + std::to_string(line_no) + ": distances must increase");
    }
    table.rows.push_back(std::move(row));
  }
  if (!header || table.rows.empty()) throw DomainError("coefficient table has no data rows");
  return table;
}

CoefficientTable load_coefficient_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open coefficient file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_coefficient_csv(ss.str());
}

const CoefficientTable& fixture(FixtureTable table) {
  static const CoefficientTable t2 = parse_coefficient_csv(detail::kTable2Csv);
  static const CoefficientTable t3 = parse_coefficient_csv(detail::kTable3Csv);
  static const CoefficientTable t4 = parse_coefficient_csv(detail::kTable4Csv);
  static const CoefficientTable t5 = parse_coefficient_csv(detail::kTable5Csv);
  switch (table) {
    case FixtureTable::table2: return t2;
    case FixtureTable::table3: return t3;
    case FixtureTable::table4: return t4;
    case FixtureTable::table5: return t5;
  }
  throw DomainError("unknown fixture table");
}

FixtureTable fixture_from_name(std::string_view name) {
  if (name == "table2") return FixtureTable::table2;
  if (name == "table3") return FixtureTable::table3;
  if (name == "table4") return FixtureTable::table4;
  if (name == "table5") return FixtureTable::table5;
  throw DomainError("unknown fixture table: " + std::string(name));
}

std::string to_string(FixtureTable table) {
  switch (table) {
    case FixtureTable::table2: return "table2";
    case FixtureTable::table3: return "table3";
    case FixtureTable::table4: return "table4";
    case FixtureTable::table5: return "table5";
  }
  return "?";
}

}  // namespace pnmdi
