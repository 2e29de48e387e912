#include "pnmdi/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pnmdi/errors.hpp"
#include "pnmdi/measurements.hpp"

namespace pnmdi {

namespace {

// Mode layout of the global pure state.
constexpr std::size_t kA1 = 0, kA2 = 1, kB1 = 3, kB2 = 4;

void check_pair(const CoefficientVector& a, const CoefficientVector& b) {
  if (a.size() != b.size()) throw DomainError("Alice and Bob must use the same photon cutoff");
  if (a.n_max() < 1) throw DomainError("n_max must be at least 1");
}

// (A1, A2', E_A, B1, B2', E_B) after both links.
FockVector swap_input(const CoefficientVector& a, const CoefficientVector& b, const ChannelParams& channel) {
  channel.validate();
  const FockVector alice = lossy_channel_purified(key_state(a), channel.tau_a, 1);
  const FockVector bob = lossy_channel_purified(key_state(b), channel.tau_b, 1);
  return tensor(alice, bob);
}

ConditionalState condition(const FockVector& global, std::size_t n_max, std::size_t c, std::size_t j) {
  const Vector phi = charlie_vector(n_max, c, j);
  const std::size_t charlie[] = {kA2, kB2};
  // remaining modes: A1, E_A, B1, E_B
  const FockVector rest = project_modes(global, phi, charlie);
  const std::size_t keep[] = {0, 2};
  DensityOperator unnorm = reduced_density(rest, keep);
  const double p = unnorm.trace_norm();
  const double p_c = static_cast<double>(c + 1) * p;
  if (p_c < kZeroProbability) return {std::move(unnorm), p_c};
  return {unnorm.normalized(), p_c};
}

double clamp0(double x) { return std::max(0.0, x); }

}  // namespace

ConditionalState conditional_state(const CoefficientVector& a, const CoefficientVector& b,
                                   const ChannelParams& channel, std::size_t c, std::size_t j) {
  check_pair(a, b);
  if (c > 2 * a.n_max()) throw DomainError("outcome c exceeds 2 n_max");
  return condition(swap_input(a, b, channel), a.n_max(), c, j);
}

std::vector<double> charlie_marginals(const CoefficientVector& a, const CoefficientVector& b,
                                      const ChannelParams& channel) {
  check_pair(a, b);
  const FockVector global = swap_input(a, b, channel);
  std::vector<double> p;
  for (std::size_t c = 0; c <= 2 * a.n_max(); ++c) p.push_back(condition(global, a.n_max(), c, 0).p_c);
  return p;
}

ProbTable photon_number_table(const DensityOperator& rho_ab) {
  if (rho_ab.dims().modes() != 2) throw DomainError("expected a two-mode state");
  const std::size_t da = rho_ab.dims()[0], db = rho_ab.dims()[1];
  std::vector<double> p(da * db);
  for (std::size_t i = 0; i < da * db; ++i) {
    p[i] = std::max(0.0, rho_ab.matrix()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)).real());
  }
  return ProbTable({{"n_a", da}, {"n_b", db}}, std::move(p));
}

double mutual_information_ab(const DensityOperator& rho_ab) {
  const ProbTable t = photon_number_table(rho_ab);
  // nonnegative in exact arithmetic; drop the rounding residue
  return std::max(0.0, shannon_entropy(t.marginal({0})) + shannon_entropy(t.marginal({1})) - shannon_entropy(t));
}

double holevo_eve(const DensityOperator& rho_ab) {
  if (rho_ab.dims().modes() != 2) throw DomainError("expected a two-mode state");
  const auto da = static_cast<Eigen::Index>(rho_ab.dims()[0]);
  const auto db = static_cast<Eigen::Index>(rho_ab.dims()[1]);
  const Matrix& m = rho_ab.matrix();
  double chi = von_neumann_entropy(rho_ab);
  for (Eigen::Index nb = 0; nb < db; ++nb) {
    // <n_b| rho |n_b> on Alice's mode
    Matrix block(da, da);
    for (Eigen::Index r = 0; r < da; ++r) {
      for (Eigen::Index s = 0; s < da; ++s) block(r, s) = m(r * db + nb, s * db + nb);
    }
    const double pb = block.trace().real();
    if (pb < kZeroProbability) continue;
    chi -= pb * von_neumann_entropy(DensityOperator(ModeDims{rho_ab.dims()[0]}, block / pb));
  }
  return chi;
}

double coherent_information_reverse(const DensityOperator& rho_ab) {
  return von_neumann_entropy(partial_trace(rho_ab, {0})) - von_neumann_entropy(rho_ab);
}

KeyRateBreakdown key_rate(const CoefficientVector& a, const CoefficientVector& b, const ChannelParams& channel) {
  check_pair(a, b);
  const std::size_t n_max = a.n_max();
  const FockVector global = swap_input(a, b, channel);

  KeyRateBreakdown out;
  for (std::size_t c = 0; c <= 2 * n_max; ++c) {
    const ConditionalState cs = condition(global, n_max, c, 0);
    KeyRateRow row;
    row.label = "c=" + std::to_string(c);
    row.c = c;
    row.p_c = cs.p_c;
    out.total_probability += cs.p_c;
    if (!cs.is_zero()) {
      row.i_ab = mutual_information_ab(cs.rho);
      row.i_e = holevo_eve(cs.rho);
      row.contribution = cs.p_c * clamp0(row.i_ab - row.i_e);
      row.rci_term = cs.p_c * clamp0(coherent_information_reverse(cs.rho));
    }
    out.total_key_rate += row.contribution;
    out.rci += row.rci_term;
    out.rows.push_back(std::move(row));
  }
  if (std::abs(out.total_probability - 1.0) > kProbabilitySumTolerance) {
    throw NumericalIntegrityError("Charlie outcome probabilities sum to " + std::to_string(out.total_probability));
  }
  return out;
}

double reverse_coherent_information(const CoefficientVector& a, const CoefficientVector& b,
                                    const ChannelParams& channel, RciMode mode) {
  if (mode == RciMode::single_repeater) return key_rate(a, b, channel).rci;
  channel.validate();
  const FockVector sent = lossy_channel_purified(key_state(a), channel.tau_total(), 1);
  return clamp0(coherent_information_reverse(reduced_density(sent, {0, 1})));
}

double plob_bound(double tau) {
  if (!(tau >= 0.0 && tau <= 1.0)) throw DomainError("transmissivity must lie in [0, 1]");
  if (tau == 1.0) return std::numeric_limits<double>::infinity();
  return -std::log2(1.0 - tau);
}

double single_repeater_bound(double tau) {
  if (!(tau >= 0.0 && tau <= 1.0)) throw DomainError("transmissivity must lie in [0, 1]");
  if (tau == 1.0) return std::numeric_limits<double>::infinity();
  return -std::log2(1.0 - std::sqrt(tau));
}

BoundCurvePoint bound_point(double distance_km, double loss_db_per_km) {
  const double tau = transmissivity(distance_km, loss_db_per_km);
  return {distance_km, tau, plob_bound(tau), single_repeater_bound(tau)};
}

}  // namespace pnmdi
