#pragma once

// Two-qubit tomography of the heralded Alice-Bob state from Pauli-basis
// statistics, and the Eve bound computed from the reconstruction.

#include <array>
#include <cstdint>
#include <optional>

#include "pnmdi/fock.hpp"
#include "pnmdi/measurements.hpp"

namespace pnmdi {

using Real3 = std::array<double, 3>;
using Real33 = std::array<Real3, 3>;

/// P(a = +-j, b = +-k) as a 2x2 table, outcome index 0 meaning +1.
ProbTable measurement_probabilities(const DensityOperator& rho_ab, PauliBasis basis_a, PauliBasis basis_b);

/// Tables for all nine basis pairs, indexed [basis_a][basis_b].
using BasisTables = std::array<std::array<ProbTable, 3>, 3>;

BasisTables exact_tables(const DensityOperator& rho_ab);

struct Singles {
  Real3 a;
  Real3 b;
};

/// a_j = P_a(+j) - P_a(-j), averaged over the partner's basis choices.
Singles singles_coefficients(const BasisTables& tables);

/// r_jk = P(++) + P(--) - P(+-) - P(-+).
Real33 correlation_coefficients(const BasisTables& tables);

struct TomographyRecord {
  Real3 a{};
  Real3 b{};
  Real33 r{};
  std::optional<std::uint64_t> shots_per_pair;  // empty for exact statistics
};

TomographyRecord exact_statistics(const DensityOperator& rho_ab);

/// Fano-form reconstruction. Exact records must be physical (eigenvalues
/// above -1e-6, else NumericalIntegrityError); sampled records are projected
/// to the nearest unit-trace PSD matrix.
DensityOperator reconstruct_state(const TomographyRecord& record);

/// Eve's Holevo bound evaluated on the reconstruction.
double eve_bound_from_tomography(const TomographyRecord& record);

/// Multinomial sampling of every basis pair, deterministic for a given seed.
TomographyRecord sample_statistics(const DensityOperator& rho_ab, std::uint64_t shots_per_pair, std::uint64_t seed);

}  // namespace pnmdi
