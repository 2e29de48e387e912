#pragma once

// Measurements used by the protocol: Charlie's coherent total-photon-number
// POVM, local photon counting, the separable cheating measurement, and the
// check states used to expose it.

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "pnmdi/fock.hpp"

namespace pnmdi {

/// One element |phi_c^j><phi_c^j| of Charlie's measurement on two modes of
/// dimension n_max + 1.
struct CharlieOutcome {
  std::size_t c;
  std::size_t j;
  Vector phi;  // sum_n w^{nj} |n, c-n> / sqrt(c+1), out-of-range terms dropped

  Matrix op() const { return phi * phi.adjoint(); }
};

class CharliePovm {
 public:
  explicit CharliePovm(std::size_t n_max);

  std::size_t n_max() const { return n_max_; }
  std::size_t dim() const { return n_max_ + 1; }
  const std::vector<CharlieOutcome>& outcomes() const { return outcomes_; }
  const CharlieOutcome& outcome(std::size_t c, std::size_t j) const;
  /// Sum of all elements; the identity on the truncated two-mode space.
  Matrix resolution() const;

 private:
  std::size_t n_max_;
  std::vector<CharlieOutcome> outcomes_;
};

CharliePovm charlie_povm(std::size_t n_max);

/// The bra vector phi_c^j without building the whole POVM.
Vector charlie_vector(std::size_t n_max, std::size_t c, std::size_t j);

/// |n><n| on a mode of dimension dim.
Matrix pnrd_projector(std::size_t n, std::size_t dim);

struct SeparableOutcome {
  std::size_t n_a;
  std::size_t n_b;
  Matrix op;
};

/// |n_a><n_a| x |n_b><n_b| for every pair.
std::vector<SeparableOutcome> separable_measurement(std::size_t n_max);

/// (n_max + 1)^(-1/2) sum_n |n>.
FockVector diagonal_check_state(std::size_t n_max);

/// What a sender transmits to Charlie in the prepare-and-measure picture.
enum class SenderChoice { key, check };

struct CheckStateStatistics {
  std::size_t n_max;
  SenderChoice alice;
  SenderChoice bob;
  std::size_t c;                             // total photon number reported
  std::vector<double> nonseparable;          // P(Pi_c^j), j = 0..c
  std::vector<std::array<std::size_t, 2>> separable_labels;
  std::vector<double> separable;             // P(n_a, n_b) with n_a + n_b = c
};

/// Exact outcome probabilities at total photon number c when Alice and Bob
/// each send either the uniform key mixture or the diagonal check state.
CheckStateStatistics check_state_statistics(std::size_t n_max, SenderChoice alice, SenderChoice bob,
                                            std::size_t c = 2);

std::string to_string(SenderChoice s);

enum class PauliBasis { x = 0, y = 1, z = 2 };

/// Mutually unbiased bases of a qubit; bases[k][0] is the +1 eigenvector.
struct MubSet {
  std::size_t dimension;
  std::vector<std::vector<Vector>> bases;
};

/// m = 2 only; other dimensions throw UnsupportedDimension.
MubSet mub_bases(std::size_t m);

/// Single-mode states a sender effectively prepares when their kept mode of
/// sqrt(e0)|00> + sqrt(e1)|11> is measured in X, Y or Z.
struct PreparedCheckStates {
  FockVector plus_x, minus_x, plus_y, minus_y, plus_z, minus_z;
};

PreparedCheckStates prepared_check_states(double eps0, double eps1);

}  // namespace pnmdi
