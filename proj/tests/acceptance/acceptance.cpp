// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>

#include "oracles.hpp"
#include "pnmdi/classical.hpp"
#include "pnmdi/fixtures.hpp"
#include "pnmdi/measurements.hpp"
#include "pnmdi/noisy.hpp"
#include "pnmdi/optimize.hpp"
#include "pnmdi/parallel.hpp"
#include "pnmdi/protocol.hpp"
#include "pnmdi/sweep.hpp"
#include "pnmdi/tomography.hpp"

using namespace pnmdi;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

std::string num(double v, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

const std::size_t kWorkers = resolve_workers(0);

/// First grid point where f > 0, refined by bisection against the previous point.
double first_positive(const std::vector<double>& grid, const std::vector<double>& values,
                      const std::function<double(double)>& f) {
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (values[i] > 0.0 && values[i - 1] <= 0.0) {
      double lo = grid[i - 1], hi = grid[i];
      for (int it = 0; it < 30; ++it) {
        const double mid = 0.5 * (lo + hi);
        (f(mid) > 0.0 ? hi : lo) = mid;
      }
      return hi;
    }
  }
  return NAN;
}

// 1
Outcome povm_completeness() {
  double worst = 0.0;
  for (std::size_t n = 1; n <= 7; ++n) {
    const auto dim = static_cast<Eigen::Index>((n + 1) * (n + 1));
    worst = std::max(worst, (charlie_povm(n).resolution() - Matrix::Identity(dim, dim)).cwiseAbs().maxCoeff());
  }
  return {worst <= 1e-12, "max |sum Pi - I| over n_max 1..7 = " + num(worst)};
}

// 2
Outcome check_state_table() {
  double worst = 0.0;
  std::size_t cells = 0;
  for (SenderChoice a : {SenderChoice::key, SenderChoice::check}) {
    for (SenderChoice b : {SenderChoice::key, SenderChoice::check}) {
      const auto st = check_state_statistics(2, a, b, 2);
      const bool both = a == SenderChoice::check && b == SenderChoice::check;
      for (std::size_t j = 0; j < st.nonseparable.size(); ++j, ++cells) {
        const double e = both ? (j == 0 ? 1.0 / 3 : 0.0) : 1.0 / 9;
        worst = std::max(worst, std::abs(st.nonseparable[j] - e));
      }
      for (double p : st.separable) {
        worst = std::max(worst, std::abs(p - 1.0 / 9));
        ++cells;
      }
    }
  }
  return {cells == 24 && worst <= 1e-12, std::to_string(cells) + " cells, max deviation " + num(worst)};
}

// 3
Outcome lossless_baseline() {
  const CoefficientVector half{0.5, 0.5};
  const double k = key_rate(half, half, ChannelParams::symmetric(0.0)).total_key_rate;
  const double brute = oracle::key_rate({0.5, 0.5}, {0.5, 0.5}, 1.0, 1.0);
  const double err = std::max(std::abs(k - 0.5), std::abs(brute - 0.5));
  return {err <= 1e-9, "K = " + num(k, 12) + ", density-matrix path " + num(brute, 12)};
}

// 4
Outcome plob_crossing_ideal() {
  const auto& t3 = fixture(FixtureTable::table3);
  auto gap = [&](double d) {
    const auto c = t3.coefficients_at(d);
    return key_rate(c, c, ChannelParams::symmetric(d)).total_key_rate - plob_bound(transmissivity(d));
  };
  const auto grid = distance_grid(0.0, 200.0, 1.0);
  const auto values = parallel_map(grid.size(), kWorkers, [&](std::size_t i) { return gap(grid[i]); });
  const double x = first_positive(grid, values, gap);
  return {std::abs(x - 108.0) <= 3.0, "key rate first exceeds PLOB at " + num(x, 5) + " km (window 105-111)"};
}

// 5
Outcome high_dimensional_convergence() {
  const auto& t2 = fixture(FixtureTable::table2);
  const auto& t3 = fixture(FixtureTable::table3);
  bool pass = true;
  std::string detail;
  for (double d : {100.0, 200.0}) {
    const auto ch = ChannelParams::symmetric(d);
    const auto c7 = t2.coefficients_at(d), c1 = t3.coefficients_at(d);
    const double k7 = key_rate(c7, c7, ch).total_key_rate, k1 = key_rate(c1, c1, ch).total_key_rate;
    const double rel = std::abs(k7 - k1) / k1;
    pass = pass && rel <= 0.02;
    detail += "d=" + num(d, 4) + ": K7 " + num(k7) + " vs K1 " + num(k1) + " (" + num(100 * rel, 3) + "%); ";
  }
  OptimizeOptions opts;
  opts.workers = kWorkers;
  const auto sweep = photon_count_sweep(1, 7, 5.0, opts);
  const double k1 = sweep.front().key_rate, k7 = sweep.back().key_rate;
  pass = pass && k7 > k1;
  detail += "d=5 optimized: K7 " + num(k7) + " vs K1 " + num(k1);
  return {pass, detail};
}

// 6
Outcome optimizer_single_photon() {
  const double d[] = {0, 10, 50, 100, 200};
  const double expected[] = {0.5, 0.6935, 0.8205, 0.8483, 0.8575};
  const auto got = parallel_map(5, kWorkers, [&](std::size_t i) {
    CoefficientProblem p;
    p.distance_km = d[i];
    p.objective = ObjectiveKind::full_quantum;
    return optimize_coefficients(p).coefficients->values()[0];
  });
  double worst = 0.0;
  std::string detail = "a0 =";
  for (std::size_t i = 0; i < 5; ++i) {
    worst = std::max(worst, std::abs(got[i] - expected[i]));
    detail += " " + num(got[i], 4);
  }
  return {worst <= 0.01, detail + ", max deviation " + num(worst, 3)};
}

// 7
Outcome gamma_regression() {
  const double d[] = {0, 100, 200};
  const double expected[] = {0.84, 0.26, 0.25};
  const auto got =
      parallel_map(3, kWorkers, [&](std::size_t i) { return *optimize_gamma(7, d[i]).gamma; });
  double worst = 0.0;
  std::string detail = "gamma =";
  for (std::size_t i = 0; i < 3; ++i) {
    worst = std::max(worst, std::abs(got[i] - expected[i]));
    detail += " " + num(got[i], 4);
  }
  return {worst <= 0.02, detail + ", max deviation " + num(worst, 3)};
}

// 8
Outcome realistic_protocol() {
  const auto& t5 = fixture(FixtureTable::table5);
  const DetectorParams det{0.85, 5e-8, 2};
  auto k = [&](double d) {
    const auto c = t5.coefficients_at(d);
    return realistic_key_rate(c, c, ChannelParams::symmetric(d), det).total_key_rate;
  };
  auto gap = [&](double d) { return k(d) - plob_bound(transmissivity(d)); };
  const auto grid = distance_grid(0.0, 200.0, 1.0);
  const auto gaps = parallel_map(grid.size(), kWorkers, [&](std::size_t i) { return gap(grid[i]); });
  const double cross = first_positive(grid, gaps, gap);

  const auto far = distance_grid(450.0, 650.0, 1.0);
  const auto rates = parallel_map(far.size(), kWorkers, [&](std::size_t i) { return k(far[i]); });
  double last = NAN;
  for (std::size_t i = 0; i + 1 < far.size(); ++i) {
    if (rates[i] > 0.0 && rates[i + 1] <= 0.0) {
      double lo = far[i], hi = far[i + 1];
      for (int it = 0; it < 30; ++it) {
        const double mid = 0.5 * (lo + hi);
        (k(mid) > 0.0 ? lo : hi) = mid;
      }
      last = lo;
    }
  }
  const bool pass = std::abs(cross - 116.0) <= 5.0 && last >= 527.0 && last <= 557.0;
  return {pass, "PLOB crossing " + num(cross, 5) + " km (111-121), last positive key " + num(last, 5) +
                    " km (527-557)"};
}

// 9
Outcome rci_crossover() {
  const auto& t2 = fixture(FixtureTable::table2);
  struct Point {
    double repeater, direct, plob;
  };
  auto eval = [&](double d) {
    const auto c = t2.coefficients_at(d);
    const auto ch = ChannelParams::symmetric(d);
    return Point{reverse_coherent_information(c, c, ch, RciMode::single_repeater),
                 reverse_coherent_information(c, c, ch, RciMode::point_to_point), plob_bound(ch.tau_total())};
  };
  const auto grid = distance_grid(0.0, 200.0, 1.0);
  const auto pts = parallel_map(grid.size(), kWorkers, [&](std::size_t i) { return eval(grid[i]); });
  std::vector<double> over_direct, over_plob;
  for (const auto& p : pts) {
    over_direct.push_back(p.repeater - p.direct);
    over_plob.push_back(p.repeater - p.plob);
  }
  const double x1 = first_positive(grid, over_direct, [&](double d) {
    const auto p = eval(d);
    return p.repeater - p.direct;
  });
  const double x2 = first_positive(grid, over_plob, [&](double d) {
    const auto p = eval(d);
    return p.repeater - p.plob;
  });
  const bool pass = std::abs(x1 - 47.0) <= 4.0 && std::abs(x2 - 108.0) <= 3.0;
  return {pass, "repeater RCI exceeds direct RCI at " + num(x1, 5) + " km (43-51), PLOB at " + num(x2, 5) +
                    " km (105-111)"};
}

// 10
Outcome key_rci_coincidence() {
  double worst = 0.0;
  for (double d : {50.0, 100.0, 200.0}) {
    const auto c = fixture(FixtureTable::table3).coefficients_at(d);
    const auto k = key_rate(c, c, ChannelParams::symmetric(d));
    worst = std::max(worst, std::abs(k.total_key_rate - k.rci));
  }
  return {worst < 1e-3, "max |K - RCI| at 50/100/200 km = " + num(worst)};
}

// 11
Outcome classical_quantum_marginals() {
  std::mt19937_64 rng(2024);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 1 + trial % 3;
    const CoefficientVector a(oracle::random_simplex(n + 1, rng)), b(oracle::random_simplex(n + 1, rng));
    const double t = std::uniform_real_distribution<double>()(rng);
    const auto q = charlie_marginals(a, b, ChannelParams{t, t});
    const auto c = classical_charlie_prob({a, b, t});
    for (std::size_t i = 0; i < q.size(); ++i) worst = std::max(worst, std::abs(q[i] - c[i]));
  }
  return {worst <= 1e-10, "50 configurations, max deviation " + num(worst)};
}

// 12
Outcome tomography_round_trip() {
  std::mt19937_64 rng(2025);
  double worst_td = 0.0, worst_chi = 0.0;
  int used = 0;
  while (used < 20) {
    const CoefficientVector c(oracle::random_simplex(2, rng));
    const double d = std::uniform_real_distribution<double>(0.0, 200.0)(rng);
    const auto cs = conditional_state(c, c, ChannelParams::symmetric(d), 1);
    if (cs.is_zero()) continue;
    const auto rec = exact_statistics(cs.rho);
    worst_td = std::max(worst_td, trace_distance(reconstruct_state(rec), cs.rho));
    worst_chi = std::max(worst_chi, std::abs(eve_bound_from_tomography(rec) - holevo_eve(cs.rho)));
    ++used;
  }
  return {worst_td <= 1e-10 && worst_chi <= 1e-9,
          "20 configurations, max trace distance " + num(worst_td) + ", max Holevo gap " + num(worst_chi)};
}

// 13
Outcome purified_vs_mixed() {
  std::mt19937_64 rng(2026);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 1 + trial % 2;
    const auto a = oracle::random_simplex(n + 1, rng), b = oracle::random_simplex(n + 1, rng);
    std::uniform_real_distribution<double> u;
    const ChannelParams ch{u(rng), u(rng)};
    for (std::size_t c = 0; c <= 2 * n; ++c) {
      const auto ref = oracle::mixed_path_conditional(a, b, ch.tau_a, ch.tau_b, c, 0);
      const auto got = conditional_state(CoefficientVector(a), CoefficientVector(b), ch, c);
      worst = std::max(worst, std::abs(got.p_c - double(c + 1) * ref.probability));
      if (!got.is_zero()) worst = std::max(worst, (got.rho.matrix() - ref.rho_ab).cwiseAbs().maxCoeff());
    }
  }
  return {worst <= 1e-10, "20 configurations, all c, max element deviation " + num(worst)};
}

}  // namespace

int main() {
  const std::pair<const char*, Outcome (*)()> criteria[] = {
      {"POVM completeness", povm_completeness},
      {"check-state table", check_state_table},
      {"lossless baseline", lossless_baseline},
      {"PLOB crossing, ideal detectors", plob_crossing_ideal},
      {"high-dimensional convergence", high_dimensional_convergence},
      {"optimizer regression, n_max=1", optimizer_single_photon},
      {"squeezing regression", gamma_regression},
      {"realistic detectors", realistic_protocol},
      {"RCI crossover", rci_crossover},
      {"K-RCI coincidence", key_rci_coincidence},
      {"classical/quantum equivalence", classical_quantum_marginals},
      {"tomography round trip", tomography_round_trip},
      {"purified vs mixed path", purified_vs_mixed},
  };
  int failures = 0;
  int index = 1;
  for (const auto& [name, run] : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s %2d %s: %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", index++, name, o.detail.c_str(), secs);
    std::fflush(stdout);
    failures += o.pass ? 0 : 1;
  }
  std::printf("%d of %zu criteria passed\n", int(std::size(criteria)) - failures, std::size(criteria));
  return failures == 0 ? 0 : 1;
}
