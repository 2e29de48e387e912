#pragma once

// Single-photon implementation with a beamsplitter-based relay and imperfect
// photon-number-resolving detectors.

#include <cstddef>
#include <string>
#include <vector>

#include "pnmdi/fock.hpp"
#include "pnmdi/optics.hpp"
#include "pnmdi/protocol.hpp"

namespace pnmdi {

/// Detector count index meaning "more than count_cutoff photons".
inline constexpr std::size_t kOverflowCount = static_cast<std::size_t>(-1);

struct RelayOutcome {
  std::size_t k1;  // counts on the first detector, or kOverflowCount
  std::size_t k2;
  Matrix effect;   // on (A2, B2), each of dimension input_dim

  std::string label() const;
};

struct HeraldingRule {
  std::vector<std::pair<std::size_t, std::size_t>> accepted{{1, 0}, {0, 1}};
  bool accepts(std::size_t k1, std::size_t k2) const;
};

/// 50:50 beamsplitter followed by two noisy detectors, in Heisenberg form.
/// Counts 0..count_cutoff are resolved per detector; anything above is one
/// overflow outcome, so the set resolves the identity.
std::vector<RelayOutcome> realistic_charlie_povm(const DetectorParams& det, std::size_t input_dim = 2,
                                                 std::size_t count_cutoff = 2);

/// Whose information the lost photons count towards.
enum class EveAttribution {
  full,        // Eve may hold the purification of the heralded Alice-Bob state
  fibre_only,  // Eve holds only the light lost in the two fibre links
};

/// Key rate restricted to heralded outcomes. Rows cover every relay outcome;
/// only accepted ones can contribute. Requires n_max = 1.
KeyRateBreakdown realistic_key_rate(const CoefficientVector& a, const CoefficientVector& b,
                                    const ChannelParams& channel, const DetectorParams& det,
                                    EveAttribution attribution = EveAttribution::full,
                                    const HeraldingRule& rule = {});

}  // namespace pnmdi
