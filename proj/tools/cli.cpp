#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include "pnmdi/errors.hpp"
#include "pnmdi/fixtures.hpp"
#include "pnmdi/measurements.hpp"
#include "pnmdi/noisy.hpp"
#include "pnmdi/optimize.hpp"
#include "pnmdi/protocol.hpp"
#include "pnmdi/sweep.hpp"
#include "pnmdi/tomography.hpp"
#include "report.hpp"

namespace pnmdi::cli {

namespace {

using nlohmann::ordered_json;

/// Bad flag values or combinations; mapped to the usage exit code.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string command;
  std::size_t n_max = 1;
  bool n_max_given = false;
  std::string grid;
  std::optional<double> distance;
  double loss_db_per_km = kDefaultLossDbPerKm;
  std::string detector;
  std::string attribution = "full";
  std::string coeffs;
  std::string gamma;
  std::uint64_t seed = 1;
  std::size_t workers = 1;
  std::size_t restarts = 8;
  std::optional<std::int64_t> shots;
  std::string out;
  std::string plot;
  std::vector<std::string> overlays;
  bool json = false;
};

double parse_number(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw UsageError("invalid " + what + ": '" + s + "'");
  }
}

std::vector<double> parse_grid(const std::string& text) {
  const auto a = text.find(':'), b = text.rfind(':');
  if (a == std::string::npos || a == b) throw UsageError("--grid expects start:stop:step, got '" + text + "'");
  const double start = parse_number(text.substr(0, a), "grid start");
  const double stop = parse_number(text.substr(a + 1, b - a - 1), "grid stop");
  const double step = parse_number(text.substr(b + 1), "grid step");
  try {
    return distance_grid(start, stop, step);
  } catch (const DomainError& e) {
    throw UsageError(std::string("--grid: ") + e.what());
  }
}

std::optional<DetectorParams> parse_detector(const std::string& text) {
  if (text.empty() || text == "ideal") return std::nullopt;
  DetectorParams det;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw UsageError("--detector expects key=value pairs, got '" + item + "'");
    const std::string key = item.substr(0, eq), value = item.substr(eq + 1);
    if (key == "eta") {
      det.efficiency = parse_number(value, "detector efficiency");
    } else if (key == "dark") {
      det.dark_count = parse_number(value, "dark count");
    } else if (key == "cutoff") {
      det.thermal_cutoff = static_cast<std::size_t>(parse_number(value, "thermal cutoff"));
    } else {
      throw UsageError("unknown detector key '" + key + "'");
    }
  }
  try {
    det.validate();
  } catch (const DomainError& e) {
    throw UsageError(std::string("--detector: ") + e.what());
  }
  return det;
}

std::string detector_echo(const std::optional<DetectorParams>& det) {
  if (!det) return "ideal";
  return "eta=" + fmt(det->efficiency) + ",dark=" + fmt(det->dark_count) + ",cutoff=" +
         std::to_string(det->thermal_cutoff);
}

EveAttribution parse_attribution(const std::string& s) {
  if (s == "full") return EveAttribution::full;
  if (s == "fibre" || s == "fibre-only" || s == "fiber") return EveAttribution::fibre_only;
  throw UsageError("--attribution must be 'full' or 'fibre'");
}

/// Opened up front so unwritable paths fail before any computation.
class OutputFile {
 public:
  OutputFile(const std::string& path, std::ostream& fallback) : fallback_(fallback) {
    if (path.empty()) return;
    file_.open(path);
    if (!file_) throw UsageError("cannot write output file: " + path);
    use_file_ = true;
  }
  std::ostream& stream() { return use_file_ ? file_ : fallback_; }

 private:
  std::ostream& fallback_;
  std::ofstream file_;
  bool use_file_ = false;
};

// -- coefficient sources ------------------------------------------------------

struct ResolvedCoefficients {
  std::string description;
  std::vector<CoefficientVector> per_point;  // aligned with the distance list
  std::vector<std::optional<double>> gamma;  // set in TMSV mode
};

std::string default_table(const RunConfig& cfg, bool realistic) {
  if (cfg.n_max == 1) return realistic ? "table5" : "table3";
  if (cfg.n_max == 7) return "table2";
  throw UsageError("no published coefficients for n_max = " + std::to_string(cfg.n_max) +
                   "; pass --coeffs optimize or a coefficient file");
}

void check_cutoff(const RunConfig& cfg, std::size_t got, const std::string& source) {
  if (cfg.n_max_given && got != cfg.n_max) {
    throw UsageError(source + " has n_max = " + std::to_string(got) + " but --n-max is " + std::to_string(cfg.n_max));
  }
}

ResolvedCoefficients resolve_coefficients(const RunConfig& cfg, const std::vector<double>& distances,
                                          const std::optional<DetectorParams>& det, EveAttribution attribution) {
  ResolvedCoefficients r;
  if (!cfg.gamma.empty()) {
    if (!cfg.coeffs.empty()) throw UsageError("--gamma and --coeffs are mutually exclusive");
    const std::size_t n = cfg.n_max_given ? cfg.n_max : 7;
    r.description = "tmsv n_max=" + std::to_string(n) + " gamma=" + cfg.gamma;
    for (double d : distances) {
      double g = 0.0;
      if (cfg.gamma == "optimize") {
        g = *optimize_gamma(n, d, cfg.loss_db_per_km).gamma;
      } else if (cfg.gamma == "table4") {
        g = fixture(FixtureTable::table4).interpolate(d)[0];
      } else {
        g = parse_number(cfg.gamma, "--gamma");
        if (!(g >= 0.0 && g < 1.0)) throw UsageError("--gamma must lie in [0, 1)");
      }
      r.per_point.push_back(CoefficientVector::normalized(tmsv_weights(g, n)));
      r.gamma.push_back(g);
    }
    return r;
  }

  const std::string source = cfg.coeffs.empty() ? default_table(cfg, det.has_value()) : cfg.coeffs;
  r.description = source;
  if (source == "optimize") {
    CoefficientProblem p;
    p.n_max = cfg.n_max;
    p.loss_db_per_km = cfg.loss_db_per_km;
    p.detector = det;
    p.attribution = attribution;
    p.objective = cfg.n_max == 1 ? ObjectiveKind::full_quantum : ObjectiveKind::classical;
    OptimizeOptions o;
    o.seed = cfg.seed;
    o.restarts = cfg.restarts;
    o.workers = cfg.workers;
    for (double d : distances) {
      p.distance_km = d;
      r.per_point.push_back(*optimize_coefficients(p, o).coefficients);
      r.gamma.emplace_back();
    }
    return r;
  }

  const CoefficientTable* table = nullptr;
  std::optional<CoefficientTable> loaded;
  if (source == "table2" || source == "table3" || source == "table5") {
    table = &fixture(fixture_from_name(source));
  } else if (source == "table4") {
    throw UsageError("table4 holds squeezing parameters; use --gamma table4");
  } else {
    loaded = load_coefficient_file(source);
    table = &*loaded;
  }
  check_cutoff(cfg, table->columns.size() - 1, source);
  for (double d : distances) {
    r.per_point.push_back(table->coefficients_at(d));
    r.gamma.emplace_back();
  }
  return r;
}

std::vector<double> distances_for(const RunConfig& cfg, const std::string& default_grid) {
  if (!cfg.grid.empty() && cfg.distance) throw UsageError("--grid and --distance are mutually exclusive");
  if (cfg.distance) {
    if (*cfg.distance < 0.0) throw UsageError("--distance must be nonnegative");
    return {*cfg.distance};
  }
  return parse_grid(cfg.grid.empty() ? default_grid : cfg.grid);
}

void common_meta(CsvWriter& csv, const RunConfig& cfg) {
  csv.meta("schema", "pnmdi-csv/" + std::to_string(kCsvSchemaVersion));
  csv.meta("command", cfg.command);
}

std::string column_suffix(const std::string& label) {
  return label.rfind("c=", 0) == 0 ? "c" + label.substr(2) : label;
}

void emit_plot(const RunConfig& cfg, std::ofstream& plot, const std::string& title, std::vector<Series> series) {
  if (!plot.is_open()) return;
  for (const auto& path : cfg.overlays) series.push_back(read_overlay(path));
  write_svg_plot(plot, title, series);
}

// -- commands ------------------------------------------------------------------

int cmd_sweep(const RunConfig& cfg, std::ostream& out, std::ofstream& plot) {
  const auto distances = distances_for(cfg, "0:200:1");
  const auto det = parse_detector(cfg.detector);
  const auto attribution = parse_attribution(cfg.attribution);
  const auto coeffs = resolve_coefficients(cfg, distances, det, attribution);

  std::map<double, std::size_t> index;
  for (std::size_t i = 0; i < distances.size(); ++i) index.emplace(distances[i], i);
  SweepOptions opts;
  opts.loss_db_per_km = cfg.loss_db_per_km;
  opts.detector = det;
  opts.attribution = attribution;
  opts.workers = cfg.workers;
  const auto rows =
      distance_sweep(distances, [&](double d) { return coeffs.per_point.at(index.at(d)); }, opts);

  if (cfg.json) {
    ordered_json j;
    j["schema"] = kCsvSchemaVersion;
    j["command"] = "sweep";
    j["config"] = {{"n_max", coeffs.per_point.front().n_max()},
                   {"loss_db_per_km", cfg.loss_db_per_km},
                   {"detector", detector_echo(det)},
                   {"attribution", cfg.attribution},
                   {"coefficients", coeffs.description}};
    j["rows"] = ordered_json::array();
    for (const auto& r : rows) {
      ordered_json row = {{"distance_km", r.distance_km}, {"tau_total", r.tau_total}, {"key_rate", r.key_rate},
                          {"rci", r.rci},                 {"plob", fmt(r.plob)},      {"single_repeater", fmt(r.single_repeater)}};
      row["outcomes"] = ordered_json::array();
      for (const auto& o : r.outcomes) {
        row["outcomes"].push_back(
            {{"label", o.label}, {"p", o.p_c}, {"i_ab", o.i_ab}, {"i_e", o.i_e}, {"contribution", o.contribution}});
      }
      j["rows"].push_back(row);
    }
    out << j.dump(2) << '\n';
  } else {
    CsvWriter csv(out);
    common_meta(csv, cfg);
    csv.meta("n_max", std::to_string(coeffs.per_point.front().n_max()));
    csv.meta("loss_db_per_km", fmt(cfg.loss_db_per_km));
    csv.meta("detector", detector_echo(det));
    csv.meta("attribution", cfg.attribution);
    csv.meta("coefficients", coeffs.description);
    csv.meta("seed", std::to_string(cfg.seed));
    std::vector<std::string> header{"distance_km", "tau_total", "key_rate", "rci", "plob", "single_repeater"};
    for (const auto& o : rows.front().outcomes) {
      const auto s = column_suffix(o.label);
      header.insert(header.end(), {"P_" + s, "I_ab_" + s, "I_e_" + s});
    }
    csv.header(header);
    for (const auto& r : rows) {
      std::vector<std::string> cells{fmt(r.distance_km), fmt(r.tau_total), fmt(r.key_rate),
                                     fmt(r.rci),         fmt(r.plob),      fmt(r.single_repeater)};
      for (const auto& o : r.outcomes) cells.insert(cells.end(), {fmt(o.p_c), fmt(o.i_ab), fmt(o.i_e)});
      csv.row(cells);
    }
  }

  std::vector<Series> series(4);
  series[0] = {"key rate", {}, "#1f77b4", false};
  series[1] = {"RCI", {}, "#2ca02c", false};
  series[2] = {"PLOB", {}, "#d62728", true};
  series[3] = {"single repeater", {}, "#9467bd", true};
  for (const auto& r : rows) {
    series[0].points.emplace_back(r.distance_km, r.key_rate);
    series[1].points.emplace_back(r.distance_km, r.rci);
    series[2].points.emplace_back(r.distance_km, r.plob);
    series[3].points.emplace_back(r.distance_km, r.single_repeater);
  }
  emit_plot(cfg, plot, "key rate, " + coeffs.description, std::move(series));
  return kExitOk;
}

int cmd_optimize(const RunConfig& cfg, std::ostream& out) {
  const auto distances = distances_for(cfg, "0:200:50");
  const auto det = parse_detector(cfg.detector);
  const auto attribution = parse_attribution(cfg.attribution);
  if (!cfg.coeffs.empty() && cfg.coeffs != "optimize") throw UsageError("optimize does not take --coeffs");
  const bool gamma_mode = !cfg.gamma.empty();
  if (gamma_mode && cfg.gamma != "optimize") throw UsageError("optimize accepts only --gamma optimize");
  if (gamma_mode && det) throw UsageError("the squeezing optimization assumes ideal detectors");

  const std::size_t n = gamma_mode && !cfg.n_max_given ? 7 : cfg.n_max;
  std::vector<OptimizationResult> results;
  for (double d : distances) {
    if (gamma_mode) {
      results.push_back(optimize_gamma(n, d, cfg.loss_db_per_km));
      continue;
    }
    CoefficientProblem p;
    p.n_max = n;
    p.distance_km = d;
    p.loss_db_per_km = cfg.loss_db_per_km;
    p.detector = det;
    p.attribution = attribution;
    p.objective = n == 1 ? ObjectiveKind::full_quantum : ObjectiveKind::classical;
    OptimizeOptions o;
    o.seed = cfg.seed;
    o.restarts = cfg.restarts;
    o.workers = cfg.workers;
    results.push_back(optimize_coefficients(p, o));
  }
  const std::string objective =
      gamma_mode ? "truncation-weighted key rate" : (n == 1 ? "key rate" : "classical surrogate");

  if (cfg.json) {
    ordered_json j;
    j["schema"] = kCsvSchemaVersion;
    j["command"] = "optimize";
    j["config"] = {{"n_max", n}, {"loss_db_per_km", cfg.loss_db_per_km}, {"detector", detector_echo(det)},
                   {"objective", objective}, {"seed", cfg.seed}, {"restarts", cfg.restarts}};
    j["rows"] = ordered_json::array();
    for (std::size_t i = 0; i < distances.size(); ++i) {
      const auto& r = results[i];
      ordered_json row = {{"distance_km", distances[i]}};
      if (gamma_mode) {
        row["gamma"] = *r.gamma;
      } else {
        row["coefficients"] = r.coefficients->values();
      }
      row["objective"] = r.objective;
      row["iterations"] = r.iterations;
      row["converged"] = r.converged;
      j["rows"].push_back(row);
    }
    out << j.dump(2) << '\n';
    return kExitOk;
  }

  CsvWriter csv(out);
  common_meta(csv, cfg);
  csv.meta("n_max", std::to_string(n));
  csv.meta("loss_db_per_km", fmt(cfg.loss_db_per_km));
  csv.meta("detector", detector_echo(det));
  csv.meta("objective", objective);
  csv.meta("seed", std::to_string(cfg.seed));
  csv.meta("restarts", std::to_string(cfg.restarts));
  std::vector<std::string> header{"distance_km"};
  if (gamma_mode) {
    header.push_back("gamma");
  } else {
    for (std::size_t k = 0; k <= n; ++k) header.push_back("a" + std::to_string(k));
  }
  header.insert(header.end(), {"objective", "iterations", "converged"});
  csv.header(header);
  for (std::size_t i = 0; i < distances.size(); ++i) {
    const auto& r = results[i];
    std::vector<std::string> cells{fmt(distances[i])};
    if (gamma_mode) {
      cells.push_back(fmt(*r.gamma));
    } else {
      for (double a : r.coefficients->values()) cells.push_back(fmt(a));
    }
    cells.insert(cells.end(), {fmt(r.objective), std::to_string(r.iterations), r.converged ? "1" : "0"});
    csv.row(cells);
  }
  return kExitOk;
}

std::string rational(double v) {
  if (std::abs(v - 1.0 / 9) < 1e-9) return "1/9";
  if (std::abs(v - 1.0 / 3) < 1e-9) return "1/3";
  if (std::abs(v) < 1e-9) return "0";
  return fmt(v);
}

int cmd_check_states(const RunConfig& cfg, std::ostream& out) {
  const std::size_t n = cfg.n_max_given ? cfg.n_max : 2;
  const bool reference = n == 2;  // the published table covers n_max = 2 only

  struct Cell {
    std::string alice, bob, kind, outcome;
    double p;
    std::optional<double> expected;
  };
  std::vector<Cell> cells;
  for (SenderChoice a : {SenderChoice::key, SenderChoice::check}) {
    for (SenderChoice b : {SenderChoice::key, SenderChoice::check}) {
      const auto st = check_state_statistics(n, a, b, 2);
      const bool both_check = a == SenderChoice::check && b == SenderChoice::check;
      for (std::size_t j = 0; j < st.nonseparable.size(); ++j) {
        std::optional<double> e;
        if (reference) e = both_check ? (j == 0 ? 1.0 / 3 : 0.0) : 1.0 / 9;
        cells.push_back({to_string(a), to_string(b), "nonseparable", "j=" + std::to_string(j), st.nonseparable[j], e});
      }
      for (std::size_t s = 0; s < st.separable.size(); ++s) {
        std::optional<double> e;
        if (reference) e = 1.0 / 9;
        const auto& l = st.separable_labels[s];
        cells.push_back({to_string(a), to_string(b), "separable",
                         "(" + std::to_string(l[0]) + "," + std::to_string(l[1]) + ")", st.separable[s], e});
      }
    }
  }
  double worst = 0.0;
  for (const auto& c : cells) {
    if (c.expected) worst = std::max(worst, std::abs(c.p - *c.expected));
  }
  const bool pass = worst <= 1e-12;

  if (cfg.json) {
    ordered_json j;
    j["schema"] = kCsvSchemaVersion;
    j["command"] = "check-states";
    j["n_max"] = n;
    j["c"] = 2;
    j["cells"] = ordered_json::array();
    for (const auto& c : cells) {
      ordered_json row = {{"alice", c.alice}, {"bob", c.bob}, {"measurement", c.kind}, {"outcome", c.outcome},
                          {"probability", c.p}};
      row["expected"] = c.expected ? ordered_json(*c.expected) : ordered_json(nullptr);
      j["cells"].push_back(row);
    }
    j["max_deviation"] = reference ? ordered_json(worst) : ordered_json(nullptr);
    j["pass"] = reference ? ordered_json(pass) : ordered_json(nullptr);
    out << j.dump(2) << '\n';
  } else {
    CsvWriter csv(out);
    common_meta(csv, cfg);
    csv.meta("n_max", std::to_string(n));
    csv.meta("photon_number", "2");
    csv.header({"alice", "bob", "measurement", "outcome", "probability", "expected"});
    for (const auto& c : cells) {
      csv.row({c.alice, c.bob, c.kind, c.outcome, fmt(c.p), c.expected ? rational(*c.expected) : ""});
    }
    if (reference) {
      csv.meta("max_deviation", fmt(worst));
      csv.meta("result", pass ? "PASS (tolerance 1e-12)" : "FAIL (tolerance 1e-12)");
    } else {
      csv.meta("result", "no reference table for this cutoff");
    }
  }
  return reference && !pass ? kExitIntegrity : kExitOk;
}

int cmd_tomography(const RunConfig& cfg, std::ostream& out) {
  if (cfg.n_max_given && cfg.n_max != 1) throw UsageError("tomography works on qubit states; use --n-max 1");
  if (!cfg.detector.empty() && cfg.detector != "ideal") throw UsageError("tomography uses the ideal relay");
  if (!cfg.grid.empty()) throw UsageError("tomography takes a single --distance");
  if (cfg.shots && *cfg.shots < 1) throw UsageError("--shots must be at least 1");
  const double d = cfg.distance.value_or(100.0);
  if (d < 0.0) throw UsageError("--distance must be nonnegative");

  RunConfig qubit = cfg;
  qubit.n_max = 1;
  qubit.n_max_given = true;
  const auto coeffs = resolve_coefficients(qubit, {d}, std::nullopt, EveAttribution::full);
  const CoefficientVector& c = coeffs.per_point.front();
  const auto cs = conditional_state(c, c, ChannelParams::symmetric(d, cfg.loss_db_per_km), 1);
  if (cs.is_zero()) throw UsageError("the c = 1 outcome never occurs at this distance");

  const TomographyRecord record =
      cfg.shots ? sample_statistics(cs.rho, static_cast<std::uint64_t>(*cfg.shots), cfg.seed) : exact_statistics(cs.rho);
  const DensityOperator rebuilt = reconstruct_state(record);
  const double td = trace_distance(rebuilt, cs.rho);
  const double direct = holevo_eve(cs.rho);
  const double tomographic = eve_bound_from_tomography(record);

  std::vector<std::pair<std::string, std::string>> metrics{
      {"distance_km", fmt(d)},
      {"p_c1", fmt(cs.p_c)},
      {"shots_per_pair", cfg.shots ? std::to_string(*cfg.shots) : "exact"},
      {"trace_distance", fmt(td)},
      {"holevo_direct", fmt(direct)},
      {"holevo_tomographic", fmt(tomographic)},
      {"holevo_difference", fmt(std::abs(direct - tomographic))},
  };
  if (cfg.json) {
    ordered_json j;
    j["schema"] = kCsvSchemaVersion;
    j["command"] = "tomography";
    j["coefficients"] = coeffs.description;
    j["seed"] = cfg.seed;
    j["distance_km"] = d;
    j["p_c1"] = cs.p_c;
    j["shots_per_pair"] = cfg.shots ? ordered_json(*cfg.shots) : ordered_json(nullptr);
    j["trace_distance"] = td;
    j["holevo_direct"] = direct;
    j["holevo_tomographic"] = tomographic;
    out << j.dump(2) << '\n';
    return kExitOk;
  }
  CsvWriter csv(out);
  common_meta(csv, cfg);
  csv.meta("coefficients", coeffs.description);
  csv.meta("loss_db_per_km", fmt(cfg.loss_db_per_km));
  csv.meta("seed", std::to_string(cfg.seed));
  csv.header({"metric", "value"});
  for (const auto& [k, v] : metrics) csv.row({k, v});
  return kExitOk;
}

int cmd_bounds(const RunConfig& cfg, std::ostream& out, std::ofstream& plot) {
  const auto distances = distances_for(cfg, "0:200:1");
  std::vector<BoundCurvePoint> pts;
  for (double d : distances) pts.push_back(bound_point(d, cfg.loss_db_per_km));
  if (cfg.json) {
    ordered_json j;
    j["schema"] = kCsvSchemaVersion;
    j["command"] = "bounds";
    j["loss_db_per_km"] = cfg.loss_db_per_km;
    j["rows"] = ordered_json::array();
    for (const auto& p : pts) {
      j["rows"].push_back({{"distance_km", p.distance_km},
                           {"tau_total", p.tau_total},
                           {"plob", fmt(p.plob)},
                           {"single_repeater", fmt(p.single_repeater)}});
    }
    out << j.dump(2) << '\n';
  } else {
    CsvWriter csv(out);
    common_meta(csv, cfg);
    csv.meta("loss_db_per_km", fmt(cfg.loss_db_per_km));
    csv.header({"distance_km", "tau_total", "plob", "single_repeater"});
    for (const auto& p : pts) csv.row({fmt(p.distance_km), fmt(p.tau_total), fmt(p.plob), fmt(p.single_repeater)});
  }
  std::vector<Series> series{{"PLOB", {}, "#d62728", true}, {"single repeater", {}, "#9467bd", true}};
  for (const auto& p : pts) {
    series[0].points.emplace_back(p.distance_km, p.plob);
    series[1].points.emplace_back(p.distance_km, p.single_repeater);
  }
  emit_plot(cfg, plot, "capacity bounds", std::move(series));
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Photon-number MDI key distribution simulator", "pnmdi"};
  app.set_config("--config", "", "line-oriented key = value file; flags on the command line take precedence");
  app.require_subcommand(1);
  app.fallthrough();

  RunConfig cfg;
  auto* n_opt = app.add_option("--n-max", cfg.n_max, "photon-number cutoff")->check(CLI::Range(1, 12));
  app.add_option("--grid", cfg.grid, "distance grid start:stop:step in km");
  app.add_option("--distance", cfg.distance, "single distance in km");
  app.add_option("--loss-db-km", cfg.loss_db_per_km, "fibre loss in dB/km")->check(CLI::NonNegativeNumber);
  app.add_option("--detector", cfg.detector, "eta=<f>,dark=<f>[,cutoff=<n>] or ideal");
  app.add_option("--attribution", cfg.attribution, "full or fibre: what Eve is credited with");
  app.add_option("--coeffs", cfg.coeffs, "coefficient file, table2, table3, table5 or optimize");
  app.add_option("--gamma", cfg.gamma, "TMSV squeezing parameter, table4 or optimize");
  app.add_option("--seed", cfg.seed, "random seed");
  app.add_option("--workers", cfg.workers, "worker threads (0 = all cores)");
  app.add_option("--restarts", cfg.restarts, "random optimizer restarts");
  app.add_option("--shots", cfg.shots, "shots per basis pair for sampled tomography");
  app.add_option("--out", cfg.out, "output path (default standard output)");
  app.add_option("--plot", cfg.plot, "SVG plot path");
  app.add_option("--overlay", cfg.overlays, "reference curve CSV (distance_km,rate) drawn on the plot");
  app.add_flag("--json", cfg.json, "emit JSON instead of CSV");

  for (const char* name : {"sweep", "optimize", "check-states", "tomography", "bounds"}) {
    static const std::map<std::string, std::string> help{
        {"sweep", "key rate, RCI and bounds over a distance grid"},
        {"optimize", "optimize sender coefficients or the TMSV squeezing"},
        {"check-states", "check-state outcome probabilities at c = 2"},
        {"tomography", "reconstruct the heralded state from Pauli statistics"},
        {"bounds", "repeaterless and single-repeater capacity bounds"}};
    app.add_subcommand(name, help.at(name));
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  cfg.command = app.get_subcommands().front()->get_name();
  cfg.n_max_given = n_opt->count() > 0;
  try {
    if (!cfg.overlays.empty() && cfg.plot.empty()) throw UsageError("--overlay needs --plot");
    OutputFile sink(cfg.out, out);
    std::ofstream plot;
    if (!cfg.plot.empty()) {
      if (cfg.command != "sweep" && cfg.command != "bounds") throw UsageError("--plot applies to sweep and bounds");
      plot.open(cfg.plot);
      if (!plot) throw UsageError("cannot write plot file: " + cfg.plot);
    }
    // buffer so a failure part-way never leaves a truncated table behind
    std::ostringstream buffer;
    int code = kExitOk;
    if (cfg.command == "sweep") code = cmd_sweep(cfg, buffer, plot);
    if (cfg.command == "optimize") code = cmd_optimize(cfg, buffer);
    if (cfg.command == "check-states") code = cmd_check_states(cfg, buffer);
    if (cfg.command == "tomography") code = cmd_tomography(cfg, buffer);
    if (cfg.command == "bounds") code = cmd_bounds(cfg, buffer, plot);
    sink.stream() << buffer.str();
    sink.stream().flush();
    return code;
  } catch (const UsageError& e) {
    err << "pnmdi: " << e.what() << '\n';
    return kExitUsage;
  } catch (const NumericalIntegrityError& e) {
    err << "pnmdi: numerical integrity failure: " << e.what() << '\n';
    return kExitIntegrity;
  } catch (const DomainError& e) {
    err << "pnmdi: " << e.what() << '\n';
    return kExitUsage;
  }
}

}  // namespace pnmdi::cli
