#pragma once

// Derivative-free maximization of the key rate (or its classical surrogate)
// over the photon-number coefficients and over the TMSV squeezing parameter.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "pnmdi/fock.hpp"
#include "pnmdi/noisy.hpp"
#include "pnmdi/optics.hpp"

namespace pnmdi {

// -- generic optimizers -------------------------------------------------------

struct NelderMeadOptions {
  std::size_t max_iterations = 2000;
  double rel_tol = 1e-9;   // stop when the simplex value spread falls below
  double abs_tol = 1e-18;  // rel_tol * |best| + abs_tol
  double initial_step = 1.0;
};

struct NelderMeadResult {
  std::vector<double> x;
  double value = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
};

NelderMeadResult nelder_mead_maximize(const std::function<double(const std::vector<double>&)>& f,
                                      std::vector<double> x0, const NelderMeadOptions& opts = {});

struct ScalarResult {
  double x = 0.0;
  double value = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
};

/// Grid scan over [lo, hi] followed by golden-section refinement around the
/// best grid point.
ScalarResult bounded_maximize(const std::function<double(double)>& f, double lo, double hi,
                              std::size_t grid_points = 41, double x_tol = 1e-9);

/// Simplex point from unconstrained logits; component 0 is the fixed reference.
std::vector<double> softmax_simplex(const std::vector<double>& z);
/// Inverse of softmax_simplex; zero weights are floored at `floor`.
std::vector<double> simplex_logits(const std::vector<double>& p, double floor = 1e-12);

// -- protocol objectives ----------------------------------------------------------

enum class ObjectiveKind {
  classical,     // clamped classical surrogate
  full_quantum,  // the key rate itself, realistic relay when a detector is given
};

struct CoefficientProblem {
  std::size_t n_max = 1;
  double distance_km = 0.0;
  double loss_db_per_km = kDefaultLossDbPerKm;
  std::optional<DetectorParams> detector;
  EveAttribution attribution = EveAttribution::full;
  ObjectiveKind objective = ObjectiveKind::classical;
};

/// Objective value at identical Alice and Bob coefficients.
double coefficient_objective(const CoefficientProblem& problem, const CoefficientVector& coeffs);

struct OptimizeOptions {
  std::size_t restarts = 8;  // random restarts, on top of deterministic warm starts
  std::uint64_t seed = 1;
  std::size_t max_iterations = 2000;
  double rel_tol = 1e-9;
  std::size_t workers = 1;
};

struct OptimizationResult {
  std::optional<CoefficientVector> coefficients;
  std::optional<double> gamma;
  double objective = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
  std::size_t restarts = 0;
};

/// Maximizes the objective over the simplex. n_max = 1 is a bounded 1-D
/// search on a_0; larger cutoffs use Nelder-Mead in softmax coordinates.
OptimizationResult optimize_coefficients(const CoefficientProblem& problem, const OptimizeOptions& opts = {});

/// N(gamma)^2 K: key rate of the renormalized truncated TMSV weighted by the
/// squared probability that both sources stay under the cutoff.
double gamma_objective(double gamma, std::size_t n_max, double distance_km,
                       double loss_db_per_km = kDefaultLossDbPerKm);

inline constexpr double kGammaUpperBound = 0.99;

OptimizationResult optimize_gamma(std::size_t n_max, double distance_km,
                                  double loss_db_per_km = kDefaultLossDbPerKm);

}  // namespace pnmdi
