#pragma once

// Linear-optical channel primitives on truncated Fock spaces.

#include <cstddef>

#include "pnmdi/fock.hpp"

namespace pnmdi {

inline constexpr double kDefaultLossDbPerKm = 0.2;

/// Link transmissivities for Alice -> Charlie and Charlie -> Bob.
struct ChannelParams {
  double tau_a = 1.0;
  double tau_b = 1.0;
  double distance_km = 0.0;
  double loss_db_per_km = kDefaultLossDbPerKm;

  /// Charlie at the midpoint: tau_a = tau_b = sqrt(tau_total) with
  /// tau_total = 10^(-loss * distance / 10).
  static ChannelParams symmetric(double distance_km, double loss_db_per_km = kDefaultLossDbPerKm);
  /// Midpoint relay for a given end-to-end transmissivity.
  static ChannelParams from_total(double tau_total);

  double tau_total() const { return tau_a * tau_b; }
  void validate() const;
};

double transmissivity(double distance_km, double loss_db_per_km = kDefaultLossDbPerKm);

/// Photon-number-resolving detector with efficiency and dark noise. The dark
/// count is (1 - efficiency) * n_bar where n_bar is the injected thermal
/// mean photon number.
struct DetectorParams {
  double efficiency = 1.0;
  double dark_count = 0.0;
  std::size_t thermal_cutoff = 2;

  static DetectorParams ideal() { return {}; }
  double thermal_mean() const;
  bool is_ideal() const { return efficiency == 1.0 && dark_count == 0.0; }
  void validate() const;
};

/// exp[acos(sqrt(tau)) (a^dag b - a b^dag)] on a (dim_a x dim_b) truncated
/// two-mode space, exponentiated blockwise per total-photon-number sector.
/// Mode a is the first tensor factor. Results are memoized.
Matrix beamsplitter_unitary(double tau, std::size_t dim_a, std::size_t dim_b);

/// Pure-loss channel on `mode`, applied as the Kraus sum obtained from the
/// beamsplitter dilation with a vacuum environment of the same dimension.
DensityOperator lossy_channel_kraus(const DensityOperator& rho, double tau, std::size_t mode);

/// Pure-loss channel keeping the environment: output has one extra mode
/// (appended last) holding the reflected light.
FockVector lossy_channel_purified(const FockVector& psi, double tau, std::size_t mode);

struct ThermalState {
  DensityOperator rho;
  double truncation_defect;  // probability mass above the cutoff before renormalizing
};

inline constexpr double kThermalDefectLimit = 1e-9;

/// n_bar^n / (1 + n_bar)^(n+1) for n = 0..cutoff, renormalized. Throws
/// CutoffError if more than kThermalDefectLimit of the mass is cut away.
ThermalState thermal_state(double n_bar, std::size_t cutoff);

/// Detector front end: mix `mode` with a thermal state at a beamsplitter of
/// transmissivity efficiency and discard the reflected port. The target mode
/// grows by thermal_cutoff levels so injected photons are representable.
DensityOperator noisy_detection_transform(const DensityOperator& rho, std::size_t mode,
                                          const DetectorParams& det);

/// Heisenberg-picture effect of observing `count` photons after the detector
/// front end, as an operator on an input mode of dimension input_dim.
Matrix noisy_detection_effect(std::size_t count, std::size_t input_dim, const DetectorParams& det);

}  // namespace pnmdi
