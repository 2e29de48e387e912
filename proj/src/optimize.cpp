#include "pnmdi/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "pnmdi/classical.hpp"
#include "pnmdi/errors.hpp"
#include "pnmdi/parallel.hpp"
#include "pnmdi/protocol.hpp"

namespace pnmdi {

NelderMeadResult nelder_mead_maximize(const std::function<double(const std::vector<double>&)>& f,
                                      std::vector<double> x0, const NelderMeadOptions& opts) {
  const std::size_t n = x0.size();
  if (n == 0) throw DomainError("Nelder-Mead needs at least one coordinate");
  using Point = std::vector<double>;
  // minimize the negated objective
  auto g = [&](const Point& x) { return -f(x); };

  std::vector<Point> pts{x0};
  for (std::size_t i = 0; i < n; ++i) {
    Point p = x0;
    p[i] += opts.initial_step;
    pts.push_back(std::move(p));
  }
  std::vector<double> val(n + 1);
  for (std::size_t i = 0; i <= n; ++i) val[i] = g(pts[i]);

  std::vector<std::size_t> order(n + 1);
  NelderMeadResult res;
  auto affine = [&](const Point& a, const Point& b, double t) {  // a + t (b - a)
    Point r(n);
    for (std::size_t k = 0; k < n; ++k) r[k] = a[k] + t * (b[k] - a[k]);
    return r;
  };

  for (res.iterations = 0; res.iterations < opts.max_iterations; ++res.iterations) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return val[a] < val[b]; });
    const std::size_t best = order.front(), worst = order.back(), second = order[n - 1];
    if (std::abs(val[worst] - val[best]) <= opts.rel_tol * std::abs(val[best]) + opts.abs_tol) {
      res.converged = true;
      break;
    }
    Point centroid(n, 0.0);
    for (std::size_t i = 0; i <= n; ++i) {
      if (i == worst) continue;
      for (std::size_t k = 0; k < n; ++k) centroid[k] += pts[i][k] / static_cast<double>(n);
    }
    const Point xr = affine(centroid, pts[worst], -1.0);
    const double fr = g(xr);
    if (fr < val[best]) {
      const Point xe = affine(centroid, pts[worst], -2.0);
      const double fe = g(xe);
      if (fe < fr) {
        pts[worst] = xe, val[worst] = fe;
      } else {
        pts[worst] = xr, val[worst] = fr;
      }
      continue;
    }
    if (fr < val[second]) {
      pts[worst] = xr, val[worst] = fr;
      continue;
    }
    const bool outside = fr < val[worst];
    const Point xc = outside ? affine(centroid, xr, 0.5) : affine(centroid, pts[worst], 0.5);
    const double fc = g(xc);
    if (fc < (outside ? fr : val[worst])) {
      pts[worst] = xc, val[worst] = fc;
      continue;
    }
    for (std::size_t i = 0; i <= n; ++i) {
      if (i == best) continue;
      pts[i] = affine(pts[best], pts[i], 0.5);
      val[i] = g(pts[i]);
    }
  }
  const auto best = static_cast<std::size_t>(std::min_element(val.begin(), val.end()) - val.begin());
  res.x = pts[best];
  res.value = -val[best];
  return res;
}

ScalarResult bounded_maximize(const std::function<double(double)>& f, double lo, double hi,
                              std::size_t grid_points, double x_tol) {
  if (!(hi > lo)) throw DomainError("empty search interval");
  grid_points = std::max<std::size_t>(grid_points, 3);
  const double h = (hi - lo) / static_cast<double>(grid_points - 1);
  std::size_t best = 0;
  double best_val = -INFINITY;
  for (std::size_t i = 0; i < grid_points; ++i) {
    const double v = f(lo + h * static_cast<double>(i));
    if (v > best_val) best = i, best_val = v;
  }

  double a = lo + h * static_cast<double>(best == 0 ? 0 : best - 1);
  double b = lo + h * static_cast<double>(std::min(best + 1, grid_points - 1));
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a), d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  ScalarResult r;
  while (b - a > x_tol && r.iterations < 200) {
    ++r.iterations;
    if (fc >= fd) {
      b = d, d = c, fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c, c = d, fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  r.converged = b - a <= x_tol;
  // the refined interior point may lose to a grid endpoint on a boundary optimum
  const double mid = 0.5 * (a + b);
  const double fm = f(mid);
  r.x = mid, r.value = fm;
  const double grid_x = lo + h * static_cast<double>(best);
  if (best_val > fm) r.x = grid_x, r.value = best_val;
  return r;
}

std::vector<double> softmax_simplex(const std::vector<double>& z) {
  std::vector<double> p(z.size() + 1);
  p[0] = 0.0;
  std::copy(z.begin(), z.end(), p.begin() + 1);
  const double mx = *std::max_element(p.begin(), p.end());
  double sum = 0.0;
  for (double& x : p) sum += (x = std::exp(x - mx));
  for (double& x : p) x /= sum;
  return p;
}

std::vector<double> simplex_logits(const std::vector<double>& p, double floor) {
  if (p.size() < 2) throw DomainError("need at least two weights");
  const double base = std::log(std::max(p[0], floor));
  std::vector<double> z;
  for (std::size_t k = 1; k < p.size(); ++k) z.push_back(std::log(std::max(p[k], floor)) - base);
  return z;
}

double coefficient_objective(const CoefficientProblem& problem, const CoefficientVector& coeffs) {
  if (coeffs.n_max() != problem.n_max) throw DomainError("coefficient length does not match n_max");
  if (problem.objective == ObjectiveKind::classical) {
    const double tau_link = std::sqrt(transmissivity(problem.distance_km, problem.loss_db_per_km));
    return classical_objective({coeffs, coeffs, tau_link});
  }
  const auto channel = ChannelParams::symmetric(problem.distance_km, problem.loss_db_per_km);
  if (problem.detector && problem.n_max == 1) {
    return realistic_key_rate(coeffs, coeffs, channel, *problem.detector, problem.attribution).total_key_rate;
  }
  if (problem.detector && !problem.detector->is_ideal()) {
    throw UnsupportedDimension("detector noise is modeled for single-photon encodings only");
  }
  return key_rate(coeffs, coeffs, channel).total_key_rate;
}

namespace {

OptimizationResult optimize_single_photon(const CoefficientProblem& problem) {
  const auto f = [&](double a0) { return coefficient_objective(problem, CoefficientVector{a0, 1.0 - a0}); };
  const ScalarResult s = bounded_maximize(f, 0.0, 1.0, 101, 1e-10);
  OptimizationResult r;
  r.coefficients = CoefficientVector{s.x, 1.0 - s.x};
  r.objective = s.value;
  r.iterations = s.iterations;
  r.converged = s.converged;
  r.restarts = 1;
  return r;
}

// Deterministic starting points: the single-photon optimum padded with small
// higher weights, and geometric profiles through it. Long links need these;
// random starts often land where every outcome is clamped to zero.
std::vector<std::vector<double>> warm_starts(const CoefficientProblem& problem) {
  CoefficientProblem one = problem;
  one.n_max = 1;
  const double a0 = optimize_single_photon(one).coefficients->values()[0];
  std::vector<std::vector<double>> starts;
  for (double pad : {1e-4, 1e-6}) {
    std::vector<double> p(problem.n_max + 1, pad);
    p[0] = a0, p[1] = 1.0 - a0;
    starts.push_back(simplex_logits(CoefficientVector::normalized(p).values()));
  }
  const double ratio = (1.0 - a0) / std::max(a0, 1e-12);
  for (double r : {ratio, 0.5 * ratio}) {
    std::vector<double> p(problem.n_max + 1);
    for (std::size_t n = 0; n <= problem.n_max; ++n) p[n] = std::pow(r, static_cast<double>(n));
    starts.push_back(simplex_logits(CoefficientVector::normalized(p).values()));
  }
  return starts;
}

}  // namespace

OptimizationResult optimize_coefficients(const CoefficientProblem& problem, const OptimizeOptions& opts) {
  if (problem.n_max < 1) throw DomainError("n_max must be at least 1");
  if (problem.n_max == 1) return optimize_single_photon(problem);

  std::vector<std::vector<double>> starts = warm_starts(problem);
  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (std::size_t r = 0; r < opts.restarts; ++r) {
    std::vector<double> z(problem.n_max);
    for (double& x : z) x = normal(rng);
    starts.push_back(std::move(z));
  }

  NelderMeadOptions nm;
  nm.max_iterations = opts.max_iterations;
  nm.rel_tol = opts.rel_tol;
  const auto f = [&](const std::vector<double>& z) {
    return coefficient_objective(problem, CoefficientVector::normalized(softmax_simplex(z)));
  };
  const auto runs = parallel_map(starts.size(), opts.workers, [&](std::size_t i) {
    return nelder_mead_maximize(f, starts[i], nm);
  });

  // ties go to the earliest start
  std::size_t best = 0;
  for (std::size_t i = 1; i < runs.size(); ++i) {
    if (runs[i].value > runs[best].value) best = i;
  }
  OptimizationResult r;
  r.coefficients = CoefficientVector::normalized(softmax_simplex(runs[best].x));
  r.objective = coefficient_objective(problem, *r.coefficients);
  r.iterations = runs[best].iterations;
  r.converged = runs[best].converged;
  r.restarts = runs.size();
  return r;
}

double gamma_objective(double gamma, std::size_t n_max, double distance_km, double loss_db_per_km) {
  const double n = tmsv_truncation_weight(gamma, n_max);
  const auto weights = tmsv_weights(gamma, n_max);
  const auto coeffs = CoefficientVector::normalized(weights);
  const auto channel = ChannelParams::symmetric(distance_km, loss_db_per_km);
  return n * n * key_rate(coeffs, coeffs, channel).total_key_rate;
}

OptimizationResult optimize_gamma(std::size_t n_max, double distance_km, double loss_db_per_km) {
  const auto f = [&](double g) { return gamma_objective(g, n_max, distance_km, loss_db_per_km); };
  const ScalarResult s = bounded_maximize(f, 0.0, kGammaUpperBound, 100, 1e-7);
  OptimizationResult r;
  r.gamma = s.x;
  r.objective = s.value;
  r.iterations = s.iterations;
  r.converged = s.converged;
  r.restarts = 1;
  return r;
}

}  // namespace pnmdi
