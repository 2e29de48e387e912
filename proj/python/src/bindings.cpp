#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "pnmdi/classical.hpp"
#include "pnmdi/errors.hpp"
#include "pnmdi/fixtures.hpp"
#include "pnmdi/measurements.hpp"
#include "pnmdi/noisy.hpp"
#include "pnmdi/optimize.hpp"
#include "pnmdi/protocol.hpp"
#include "pnmdi/sweep.hpp"
#include "pnmdi/tomography.hpp"

namespace py = pybind11;
using namespace pnmdi;

namespace {

// Python callers pass plain sequences; the simplex check happens here.
CoefficientVector coeffs(const std::vector<double>& v) { return CoefficientVector(v); }

DensityOperator two_qubit(const Matrix& rho) { return DensityOperator(ModeDims{2, 2}, rho); }

EveAttribution attribution(const std::string& s) {
  if (s == "full") return EveAttribution::full;
  if (s == "fibre") return EveAttribution::fibre_only;
  throw DomainError("attribution must be 'full' or 'fibre'");
}

py::dict record_to_dict(const TomographyRecord& r) {
  py::dict d;
  d["a"] = r.a;
  d["b"] = r.b;
  d["r"] = r.r;
  d["shots_per_pair"] = r.shots_per_pair;
  return d;
}

TomographyRecord record_from_dict(const py::dict& d) {
  TomographyRecord r;
  r.a = d["a"].cast<Real3>();
  r.b = d["b"].cast<Real3>();
  r.r = d["r"].cast<Real33>();
  if (d.contains("shots_per_pair") && !d["shots_per_pair"].is_none()) {
    r.shots_per_pair = d["shots_per_pair"].cast<std::uint64_t>();
  }
  return r;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Photon-number MDI key distribution: key rates, bounds, optimizers, tomography";

  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<NumericalIntegrityError>(m, "NumericalIntegrityError", PyExc_ArithmeticError);

  py::class_<ChannelParams>(m, "ChannelParams")
      .def(py::init([](double tau_a, double tau_b) { return ChannelParams{tau_a, tau_b}; }), py::arg("tau_a"),
           py::arg("tau_b"))
      .def_static("symmetric", &ChannelParams::symmetric, py::arg("distance_km"),
                  py::arg("loss_db_per_km") = kDefaultLossDbPerKm)
      .def_readonly("tau_a", &ChannelParams::tau_a)
      .def_readonly("tau_b", &ChannelParams::tau_b)
      .def_property_readonly("tau_total", &ChannelParams::tau_total);

  py::class_<DetectorParams>(m, "DetectorParams")
      .def(py::init([](double eta, double dark, std::size_t cutoff) {
             DetectorParams d{eta, dark, cutoff};
             d.validate();
             return d;
           }),
           py::arg("efficiency") = 1.0, py::arg("dark_count") = 0.0, py::arg("thermal_cutoff") = 2)
      .def_readonly("efficiency", &DetectorParams::efficiency)
      .def_readonly("dark_count", &DetectorParams::dark_count);

  py::class_<KeyRateRow>(m, "KeyRateRow")
      .def_readonly("label", &KeyRateRow::label)
      .def_readonly("p", &KeyRateRow::p_c)
      .def_readonly("i_ab", &KeyRateRow::i_ab)
      .def_readonly("i_e", &KeyRateRow::i_e)
      .def_readonly("contribution", &KeyRateRow::contribution);

  py::class_<KeyRateBreakdown>(m, "KeyRateBreakdown")
      .def_readonly("rows", &KeyRateBreakdown::rows)
      .def_readonly("total_key_rate", &KeyRateBreakdown::total_key_rate)
      .def_readonly("rci", &KeyRateBreakdown::rci)
      .def_readonly("total_probability", &KeyRateBreakdown::total_probability);

  m.def("transmissivity", &transmissivity, py::arg("distance_km"), py::arg("loss_db_per_km") = kDefaultLossDbPerKm);
  m.def("plob_bound", &plob_bound, py::arg("tau"));
  m.def("single_repeater_bound", &single_repeater_bound, py::arg("tau"));
  m.def(
      "bound_point",
      [](double d, double loss) {
        const auto p = bound_point(d, loss);
        return py::make_tuple(p.tau_total, p.plob, p.single_repeater);
      },
      py::arg("distance_km"), py::arg("loss_db_per_km") = kDefaultLossDbPerKm,
      "(tau_total, plob, single_repeater) at one distance");

  m.def("charlie_povm_resolution", [](std::size_t n_max) { return charlie_povm(n_max).resolution(); },
        py::arg("n_max"), "Sum of all relay POVM elements; the identity up to rounding");

  m.def(
      "conditional_state",
      [](const std::vector<double>& a, const std::vector<double>& b, const ChannelParams& ch, std::size_t c,
         std::size_t j) {
        const auto cs = conditional_state(coeffs(a), coeffs(b), ch, c, j);
        return py::make_tuple(Matrix(cs.rho.matrix()), cs.p_c);
      },
      py::arg("a"), py::arg("b"), py::arg("channel"), py::arg("c"), py::arg("j") = 0,
      "(rho_AB, P_c) for relay outcome c");

  m.def(
      "key_rate",
      [](const std::vector<double>& a, const std::vector<double>& b, const ChannelParams& ch) {
        return key_rate(coeffs(a), coeffs(b), ch);
      },
      py::arg("a"), py::arg("b"), py::arg("channel"));

  m.def(
      "realistic_key_rate",
      [](const std::vector<double>& a, const std::vector<double>& b, const ChannelParams& ch,
         const DetectorParams& det, const std::string& attr) {
        return realistic_key_rate(coeffs(a), coeffs(b), ch, det, attribution(attr));
      },
      py::arg("a"), py::arg("b"), py::arg("channel"), py::arg("detector"), py::arg("attribution") = "full");

  m.def(
      "reverse_coherent_information",
      [](const std::vector<double>& a, const std::vector<double>& b, const ChannelParams& ch, bool repeater) {
        return reverse_coherent_information(coeffs(a), coeffs(b), ch,
                                            repeater ? RciMode::single_repeater : RciMode::point_to_point);
      },
      py::arg("a"), py::arg("b"), py::arg("channel"), py::arg("repeater") = true);

  m.def(
      "charlie_marginals",
      [](const std::vector<double>& a, const std::vector<double>& b, const ChannelParams& ch) {
        return charlie_marginals(coeffs(a), coeffs(b), ch);
      },
      py::arg("a"), py::arg("b"), py::arg("channel"));
  m.def(
      "classical_charlie_prob",
      [](const std::vector<double>& a, const std::vector<double>& b, double tau_link) {
        return classical_charlie_prob({coeffs(a), coeffs(b), tau_link});
      },
      py::arg("a"), py::arg("b"), py::arg("tau_link"));

  m.def(
      "check_state_statistics",
      [](std::size_t n_max, const std::string& alice, const std::string& bob) {
        auto choice = [](const std::string& s) {
          if (s == "K") return SenderChoice::key;
          if (s == "+") return SenderChoice::check;
          throw DomainError("sender choice must be 'K' or '+'");
        };
        const auto st = check_state_statistics(n_max, choice(alice), choice(bob));
        return py::make_tuple(st.nonseparable, st.separable);
      },
      py::arg("n_max"), py::arg("alice"), py::arg("bob"),
      "(nonseparable, separable) outcome probabilities at c = 2");

  py::class_<OptimizationResult>(m, "OptimizationResult")
      .def_property_readonly("coefficients",
                             [](const OptimizationResult& r) -> std::optional<std::vector<double>> {
                               if (!r.coefficients) return std::nullopt;
                               return r.coefficients->values();
                             })
      .def_readonly("gamma", &OptimizationResult::gamma)
      .def_readonly("objective", &OptimizationResult::objective)
      .def_readonly("iterations", &OptimizationResult::iterations)
      .def_readonly("converged", &OptimizationResult::converged);

  m.def(
      "optimize_coefficients",
      [](std::size_t n_max, double d, std::optional<DetectorParams> det, bool full_quantum, std::size_t restarts,
         std::uint64_t seed, std::size_t workers) {
        CoefficientProblem p;
        p.n_max = n_max;
        p.distance_km = d;
        p.detector = det;
        p.objective = full_quantum ? ObjectiveKind::full_quantum : ObjectiveKind::classical;
        OptimizeOptions o;
        o.restarts = restarts;
        o.seed = seed;
        o.workers = workers;
        py::gil_scoped_release release;
        return optimize_coefficients(p, o);
      },
      py::arg("n_max"), py::arg("distance_km"), py::arg("detector") = std::nullopt, py::arg("full_quantum") = false,
      py::arg("restarts") = 8, py::arg("seed") = 1, py::arg("workers") = 1);

  m.def(
      "optimize_gamma",
      [](std::size_t n_max, double d) {
        py::gil_scoped_release release;
        return optimize_gamma(n_max, d);
      },
      py::arg("n_max"), py::arg("distance_km"));

  m.def(
      "fixture_coefficients",
      [](const std::string& table, double d) { return fixture(fixture_from_name(table)).interpolate(d); },
      py::arg("table"), py::arg("distance_km"), "Published table row at a distance (linear interpolation)");

  py::class_<SweepRow>(m, "SweepRow")
      .def_readonly("distance_km", &SweepRow::distance_km)
      .def_readonly("tau_total", &SweepRow::tau_total)
      .def_readonly("key_rate", &SweepRow::key_rate)
      .def_readonly("rci", &SweepRow::rci)
      .def_readonly("plob", &SweepRow::plob)
      .def_readonly("single_repeater", &SweepRow::single_repeater)
      .def_readonly("outcomes", &SweepRow::outcomes);

  m.def(
      "distance_sweep",
      [](const std::vector<double>& distances, const std::string& table, std::optional<DetectorParams> det,
         std::size_t workers) {
        const CoefficientTable& t = fixture(fixture_from_name(table));
        SweepOptions o;
        o.detector = det;
        o.workers = workers;
        py::gil_scoped_release release;
        return distance_sweep(distances, [&t](double d) { return t.coefficients_at(d); }, o);
      },
      py::arg("distances"), py::arg("table") = "table3", py::arg("detector") = std::nullopt, py::arg("workers") = 1,
      "Sweep using a published coefficient table");

  m.def("exact_statistics", [](const Matrix& rho) { return record_to_dict(exact_statistics(two_qubit(rho))); },
        py::arg("rho_ab"));
  m.def(
      "sample_statistics",
      [](const Matrix& rho, std::uint64_t shots, std::uint64_t seed) {
        return record_to_dict(sample_statistics(two_qubit(rho), shots, seed));
      },
      py::arg("rho_ab"), py::arg("shots_per_pair"), py::arg("seed") = 1);
  m.def("reconstruct_state",
        [](const py::dict& rec) { return Matrix(reconstruct_state(record_from_dict(rec)).matrix()); },
        py::arg("record"));
  m.def("eve_bound_from_tomography",
        [](const py::dict& rec) { return eve_bound_from_tomography(record_from_dict(rec)); }, py::arg("record"));
}
