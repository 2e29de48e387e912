#include "pnmdi/classical.hpp"

#include <algorithm>
#include <cmath>

#include "pnmdi/errors.hpp"
#include "pnmdi/protocol.hpp"

namespace pnmdi {

namespace {

double binom(std::size_t n, std::size_t k) {
  double r = 1.0;
  for (std::size_t i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  return r;
}

// P(k of n photons survive); pow(0, 0) is 1 so the tau = 0 and 1 limits are exact.
double survive(std::size_t n, std::size_t k, double tau) {
  return binom(n, k) * std::pow(tau, static_cast<double>(k)) * std::pow(1.0 - tau, static_cast<double>(n - k));
}

// Joint table over (n_c, n_a, n_b, n_ea, n_eb), unconditioned.
std::vector<double> joint_abe(const ClassicalModel& m) {
  const std::size_t d = m.n_max() + 1;
  const std::size_t nc_count = 2 * m.n_max() + 1;
  std::vector<double> t(nc_count * d * d * d * d, 0.0);
  for (std::size_t na = 0; na < d; ++na) {
    for (std::size_t nb = 0; nb < d; ++nb) {
      const double prior = m.p_a[na] * m.p_b[nb];
      if (prior == 0.0) continue;
      for (std::size_t ea = 0; ea <= na; ++ea) {
        for (std::size_t eb = 0; eb <= nb; ++eb) {
          const std::size_t nc = na + nb - ea - eb;
          const double w = prior * survive(na, na - ea, m.tau_link) * survive(nb, nb - eb, m.tau_link);
          t[(((nc * d + na) * d + nb) * d + ea) * d + eb] += w;
        }
      }
    }
  }
  return t;
}

ProbTable conditioned_abe(const ClassicalModel& m, const std::vector<double>& joint, std::size_t n_c) {
  const std::size_t d = m.n_max() + 1;
  const std::size_t block = d * d * d * d;
  std::vector<double> p(joint.begin() + static_cast<std::ptrdiff_t>(n_c * block),
                        joint.begin() + static_cast<std::ptrdiff_t>((n_c + 1) * block));
  double pc = 0.0;
  for (double x : p) pc += x;
  if (pc < kZeroProbability) throw DomainError("conditioning on a zero-probability photon count");
  for (double& x : p) x /= pc;
  return ProbTable({{"n_a", d}, {"n_b", d}, {"n_ea", d}, {"n_eb", d}}, std::move(p));
}

double mutual_information(const ProbTable& t, std::initializer_list<std::size_t> x,
                          std::initializer_list<std::size_t> y) {
  std::vector<std::size_t> xy(x);
  xy.insert(xy.end(), y.begin(), y.end());
  return shannon_entropy(t.marginal(x)) + shannon_entropy(t.marginal(y)) - shannon_entropy(t.marginal(xy));
}

}  // namespace

void ClassicalModel::validate() const {
  if (p_a.size() != p_b.size()) throw DomainError("Alice and Bob must use the same photon cutoff");
  if (!(tau_link >= 0.0 && tau_link <= 1.0)) throw DomainError("transmissivity must lie in [0, 1]");
}

std::vector<double> classical_arrival_prob(const CoefficientVector& p, double tau_link) {
  if (!(tau_link >= 0.0 && tau_link <= 1.0)) throw DomainError("transmissivity must lie in [0, 1]");
  std::vector<double> out(p.size(), 0.0);
  for (std::size_t n = 0; n < p.size(); ++n) {
    for (std::size_t k = 0; k <= n; ++k) out[k] += survive(n, k, tau_link) * p[n];
  }
  return out;
}

std::vector<double> classical_charlie_prob(const ClassicalModel& model) {
  model.validate();
  const auto pa = classical_arrival_prob(model.p_a, model.tau_link);
  const auto pb = classical_arrival_prob(model.p_b, model.tau_link);
  std::vector<double> out(pa.size() + pb.size() - 1, 0.0);
  for (std::size_t i = 0; i < pa.size(); ++i) {
    for (std::size_t j = 0; j < pb.size(); ++j) out[i + j] += pa[i] * pb[j];
  }
  return out;
}

ProbTable classical_abe_table(const ClassicalModel& model, std::size_t n_c) {
  model.validate();
  if (n_c > 2 * model.n_max()) throw DomainError("photon count exceeds 2 n_max");
  return conditioned_abe(model, joint_abe(model), n_c);
}

ProbTable classical_ab_table(const ClassicalModel& model, std::size_t n_c) {
  return classical_abe_table(model, n_c).marginal({0, 1});
}

double classical_objective(const ClassicalModel& model, ClampPolicy clamp) {
  model.validate();
  const auto joint = joint_abe(model);
  const auto pc = classical_charlie_prob(model);
  double total = 0.0;
  for (std::size_t nc = 0; nc < pc.size(); ++nc) {
    if (pc[nc] < kZeroProbability) continue;
    const ProbTable t = conditioned_abe(model, joint, nc);
    // axes: 0 = A, 1 = B, 2/3 = Eve's two lost-photon registers
    const double gap = mutual_information(t, {0}, {1}) - mutual_information(t, {0}, {2, 3});
    total += pc[nc] * (clamp == ClampPolicy::clamped ? std::max(0.0, gap) : gap);
  }
  return total;
}

}  // namespace pnmdi
