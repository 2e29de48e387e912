#pragma once

// End-to-end evaluation of the entanglement-swapping protocol: conditional
// states after Charlie's outcome, key rate, Eve's Holevo bound, reverse
// coherent information and the loss benchmarks.

#include <cstddef>
#include <string>
#include <vector>

#include "pnmdi/fock.hpp"
#include "pnmdi/optics.hpp"

namespace pnmdi {

/// Probabilities below this are treated as exactly zero.
inline constexpr double kZeroProbability = 1e-15;
inline constexpr double kProbabilitySumTolerance = 1e-9;

struct ConditionalState {
  DensityOperator rho;  // normalized on (A1, B1) unless p_c is zero
  double p_c;           // total probability of outcome c, summed over j
  bool is_zero() const { return p_c < kZeroProbability; }
};

/// rho_{AB|c} and P_c for outcome (c, j), computed from the purified
/// six-mode state (A1, A2', E_A, B1, B2', E_B). p_c is (c + 1) times the
/// single-j probability.
ConditionalState conditional_state(const CoefficientVector& a, const CoefficientVector& b,
                                   const ChannelParams& channel, std::size_t c, std::size_t j = 0);

/// P_c for c = 0..2 n_max.
std::vector<double> charlie_marginals(const CoefficientVector& a, const CoefficientVector& b,
                                      const ChannelParams& channel);

/// Diagonal table P(n_a, n_b) of a two-mode state.
ProbTable photon_number_table(const DensityOperator& rho_ab);

/// Shannon mutual information of the photon-number table.
double mutual_information_ab(const DensityOperator& rho_ab);

/// S(rho_AB) - sum_b P_b S(rho_{A|b}), with b Bob's photon number.
double holevo_eve(const DensityOperator& rho_ab);

/// S(rho_A) - S(rho_AB), not clamped.
double coherent_information_reverse(const DensityOperator& rho_ab);

struct KeyRateRow {
  std::string label;  // outcome label, e.g. "c=1" or "10"
  std::size_t c = 0;
  double p_c = 0.0;
  double i_ab = 0.0;
  double i_e = 0.0;
  double contribution = 0.0;  // p_c * max(0, i_ab - i_e)
  double rci_term = 0.0;      // p_c * max(0, S(A) - S(AB))
};

struct KeyRateBreakdown {
  std::vector<KeyRateRow> rows;
  double total_key_rate = 0.0;
  double rci = 0.0;
  double total_probability = 0.0;  // all outcomes, including those not listed as rows
};

/// Asymptotic key rate sum_c P_c max(0, I_AB - I_E). Throws
/// NumericalIntegrityError if the outcome probabilities do not sum to one.
KeyRateBreakdown key_rate(const CoefficientVector& a, const CoefficientVector& b, const ChannelParams& channel);

enum class RciMode { point_to_point, single_repeater };

/// Single repeater: the c-averaged clamped RCI of the swapped state.
/// Point to point: Alice's mode sent straight to Bob over the whole link.
double reverse_coherent_information(const CoefficientVector& a, const CoefficientVector& b,
                                    const ChannelParams& channel, RciMode mode);

/// -log2(1 - tau); +inf at tau = 1.
double plob_bound(double tau);
/// -log2(1 - sqrt(tau)); +inf at tau = 1.
double single_repeater_bound(double tau);

struct BoundCurvePoint {
  double distance_km;
  double tau_total;
  double plob;
  double single_repeater;
};

BoundCurvePoint bound_point(double distance_km, double loss_db_per_km = kDefaultLossDbPerKm);

}  // namespace pnmdi
