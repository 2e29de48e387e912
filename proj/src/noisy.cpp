#include "pnmdi/noisy.hpp"

#include <algorithm>
#include <cmath>

#include "pnmdi/errors.hpp"

namespace pnmdi {

std::string RelayOutcome::label() const {
  auto one = [](std::size_t k) { return k == kOverflowCount ? std::string("+") : std::to_string(k); };
  return one(k1) + one(k2);
}

bool HeraldingRule::accepts(std::size_t k1, std::size_t k2) const {
  return std::find(accepted.begin(), accepted.end(), std::pair{k1, k2}) != accepted.end();
}

std::vector<RelayOutcome> realistic_charlie_povm(const DetectorParams& det, std::size_t input_dim,
                                                 std::size_t count_cutoff) {
  det.validate();
  if (input_dim < 1) throw DomainError("input dimension must be positive");
  // both inputs may bunch into one output port
  const std::size_t d = 2 * (input_dim - 1) + 1;
  const auto di = static_cast<Eigen::Index>(d);

  std::vector<Matrix> local;
  Matrix resolved = Matrix::Zero(di, di);
  for (std::size_t k = 0; k <= count_cutoff; ++k) {
    local.push_back(noisy_detection_effect(k, d, det));
    resolved += local.back();
  }
  local.push_back(Matrix::Identity(di, di) - resolved);

  const Matrix u = beamsplitter_unitary(0.5, d, d);
  std::vector<Eigen::Index> keep;
  for (std::size_t i = 0; i < input_dim; ++i) {
    for (std::size_t j = 0; j < input_dim; ++j) keep.push_back(static_cast<Eigen::Index>(i * d + j));
  }

  auto count_of = [&](std::size_t idx) { return idx <= count_cutoff ? idx : kOverflowCount; };
  std::vector<RelayOutcome> out;
  for (std::size_t i = 0; i < local.size(); ++i) {
    for (std::size_t j = 0; j < local.size(); ++j) {
      Matrix e(di * di, di * di);
      for (Eigen::Index r = 0; r < di; ++r) {
        for (Eigen::Index s = 0; s < di; ++s) e.block(r * di, s * di, di, di) = local[i](r, s) * local[j];
      }
      const Matrix full = u.adjoint() * e * u;
      out.push_back({count_of(i), count_of(j), full(keep, keep)});
    }
  }
  return out;
}

namespace {

double holevo_fibre(const DensityOperator& state) {
  // modes (A1, E_A, B1, E_B); Bob's raw key is B1, Eve holds E_A E_B
  const DensityOperator rho_be = partial_trace(state, {2, 1, 3});
  const auto db = static_cast<Eigen::Index>(rho_be.dims()[0]);
  const auto de = static_cast<Eigen::Index>(rho_be.dims()[1] * rho_be.dims()[2]);
  const ModeDims eve{rho_be.dims()[1], rho_be.dims()[2]};
  double chi = von_neumann_entropy(partial_trace(rho_be, {1, 2}));
  for (Eigen::Index b = 0; b < db; ++b) {
    const Matrix block = rho_be.matrix().block(b * de, b * de, de, de);
    const double pb = block.trace().real();
    if (pb < kZeroProbability) continue;
    chi -= pb * von_neumann_entropy(DensityOperator(eve, block / pb));
  }
  return chi;
}

}  // namespace

KeyRateBreakdown realistic_key_rate(const CoefficientVector& a, const CoefficientVector& b,
                                    const ChannelParams& channel, const DetectorParams& det,
                                    EveAttribution attribution, const HeraldingRule& rule) {
  if (a.n_max() != 1 || b.n_max() != 1) {
    throw UnsupportedDimension("the beamsplitter relay is modeled for single-photon encodings only");
  }
  channel.validate();
  const FockVector alice = lossy_channel_purified(key_state(a), channel.tau_a, 1);
  const FockVector bob = lossy_channel_purified(key_state(b), channel.tau_b, 1);
  const FockVector global = tensor(alice, bob);  // A1, A2', E_A, B1, B2', E_B
  const std::size_t relay_modes[] = {1, 4};

  KeyRateBreakdown out;
  for (const auto& o : realistic_charlie_povm(det, 2)) {
    DensityOperator state = trace_with_effect(global, o.effect, relay_modes);
    KeyRateRow row;
    row.label = o.label();
    row.c = (o.k1 == kOverflowCount || o.k2 == kOverflowCount) ? kOverflowCount : o.k1 + o.k2;
    row.p_c = state.trace_norm();
    out.total_probability += row.p_c;
    if (rule.accepts(o.k1, o.k2) && row.p_c >= kZeroProbability) {
      const DensityOperator heralded = state.normalized();
      const DensityOperator rho_ab = partial_trace(heralded, {0, 2});
      row.i_ab = mutual_information_ab(rho_ab);
      row.i_e = attribution == EveAttribution::full ? holevo_eve(rho_ab) : holevo_fibre(heralded);
      row.contribution = row.p_c * std::max(0.0, row.i_ab - row.i_e);
      row.rci_term = row.p_c * std::max(0.0, coherent_information_reverse(rho_ab));
    }
    out.total_key_rate += row.contribution;
    out.rci += row.rci_term;
    out.rows.push_back(std::move(row));
  }
  if (std::abs(out.total_probability - 1.0) > kProbabilitySumTolerance) {
    throw NumericalIntegrityError("relay outcome probabilities sum to " + std::to_string(out.total_probability));
  }
  return out;
}

}  // namespace pnmdi
