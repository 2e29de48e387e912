#pragma once

// Classical photon-counting surrogate of the protocol: binomial loss on each
// link, Charlie sees the total arriving photon number, Eve keeps what is lost.

#include <cstddef>
#include <vector>

#include "pnmdi/fock.hpp"

namespace pnmdi {

struct ClassicalModel {
  CoefficientVector p_a;
  CoefficientVector p_b;
  double tau_link;  // per-link transmissivity

  std::size_t n_max() const { return p_a.n_max(); }
  void validate() const;
};

/// Binomial thinning of a photon-number distribution.
std::vector<double> classical_arrival_prob(const CoefficientVector& p, double tau_link);

/// Distribution of the total photon number reaching Charlie, n_c = 0..2 n_max.
std::vector<double> classical_charlie_prob(const ClassicalModel& model);

/// P(n_a, n_b | n_c). Throws DomainError when n_c has zero probability.
ProbTable classical_ab_table(const ClassicalModel& model, std::size_t n_c);

/// P(n_a, n_b, n_ea, n_eb | n_c) with n_ea, n_eb the photons lost on each link.
ProbTable classical_abe_table(const ClassicalModel& model, std::size_t n_c);

/// How each outcome's I_AB - I_AE enters the objective.
enum class ClampPolicy {
  clamped,    // sum P_c max(0, I_AB - I_AE), matching how the key rate treats outcomes
  unclamped,  // sum P_c (I_AB - I_AE)
};

/// Average advantage of Alice-Bob over Alice-Eve information in bits.
double classical_objective(const ClassicalModel& model, ClampPolicy clamp = ClampPolicy::clamped);

}  // namespace pnmdi
