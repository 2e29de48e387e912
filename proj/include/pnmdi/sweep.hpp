#pragma once

// Distance and photon-cutoff sweeps fanned out over a worker pool. Rows are
// always returned in grid order, whatever the worker count.

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "pnmdi/noisy.hpp"
#include "pnmdi/optimize.hpp"
#include "pnmdi/protocol.hpp"

namespace pnmdi {

/// start, start + step, ... up to stop (inclusive within half a step).
std::vector<double> distance_grid(double start, double stop, double step);

struct SweepRow {
  double distance_km = 0.0;
  double tau_total = 1.0;
  double key_rate = 0.0;
  double rci = 0.0;
  double plob = 0.0;
  double single_repeater = 0.0;
  std::vector<KeyRateRow> outcomes;
};

using CoefficientSource = std::function<CoefficientVector(double distance_km)>;

struct SweepOptions {
  double loss_db_per_km = kDefaultLossDbPerKm;
  std::optional<DetectorParams> detector;  // realistic relay when set
  EveAttribution attribution = EveAttribution::full;
  std::size_t workers = 1;
};

SweepRow evaluate_point(double distance_km, const CoefficientVector& coeffs, const SweepOptions& opts);

std::vector<SweepRow> distance_sweep(const std::vector<double>& distances, const CoefficientSource& coeffs,
                                     const SweepOptions& opts = {});

struct PhotonCountPoint {
  std::size_t n_max;
  CoefficientVector coefficients;
  double key_rate;
};

/// Optimizes the coefficients for each cutoff in [n_lo, n_hi] at one
/// distance and reports the resulting key rate.
std::vector<PhotonCountPoint> photon_count_sweep(std::size_t n_lo, std::size_t n_hi, double distance_km,
                                                 const OptimizeOptions& opts = {},
                                                 double loss_db_per_km = kDefaultLossDbPerKm);

}  // namespace pnmdi
