#include "pnmdi/sweep.hpp"

#include <cmath>

#include "pnmdi/errors.hpp"
#include "pnmdi/parallel.hpp"

namespace pnmdi {

std::vector<double> distance_grid(double start, double stop, double step) {
  if (!(step > 0.0)) throw DomainError("grid step must be positive");
  if (!(stop >= start)) throw DomainError("grid stop must not precede start");
  if (start < 0.0) throw DomainError("distances must be nonnegative");
  // index-based so long grids do not accumulate rounding drift
  const auto n = static_cast<std::size_t>(std::floor((stop - start) / step + 0.5));
  std::vector<double> grid;
  for (std::size_t i = 0; i <= n; ++i) grid.push_back(start + step * static_cast<double>(i));
  return grid;
}

SweepRow evaluate_point(double distance_km, const CoefficientVector& coeffs, const SweepOptions& opts) {
  const auto channel = ChannelParams::symmetric(distance_km, opts.loss_db_per_km);
  const KeyRateBreakdown k = opts.detector
                                 ? realistic_key_rate(coeffs, coeffs, channel, *opts.detector, opts.attribution)
                                 : key_rate(coeffs, coeffs, channel);
  const double tau = channel.tau_total();
  return {distance_km, tau, k.total_key_rate, k.rci, plob_bound(tau), single_repeater_bound(tau), k.rows};
}

std::vector<SweepRow> distance_sweep(const std::vector<double>& distances, const CoefficientSource& coeffs,
                                     const SweepOptions& opts) {
  return parallel_map(distances.size(), opts.workers,
                      [&](std::size_t i) { return evaluate_point(distances[i], coeffs(distances[i]), opts); });
}

std::vector<PhotonCountPoint> photon_count_sweep(std::size_t n_lo, std::size_t n_hi, double distance_km,
                                                 const OptimizeOptions& opts, double loss_db_per_km) {
  if (n_lo < 1 || n_hi < n_lo) throw DomainError("invalid photon cutoff range");
  const auto channel = ChannelParams::symmetric(distance_km, loss_db_per_km);
  std::vector<PhotonCountPoint> out;
  for (std::size_t n = n_lo; n <= n_hi; ++n) {
    CoefficientProblem problem;
    problem.n_max = n;
    problem.distance_km = distance_km;
    problem.loss_db_per_km = loss_db_per_km;
    problem.objective = n == 1 ? ObjectiveKind::full_quantum : ObjectiveKind::classical;
    const CoefficientVector c = *optimize_coefficients(problem, opts).coefficients;
    out.push_back({n, c, key_rate(c, c, channel).total_key_rate});
  }
  return out;
}

}  // namespace pnmdi
