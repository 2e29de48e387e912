#include "pnmdi/measurements.hpp"

#include <cmath>
#include <numbers>

#include "pnmdi/errors.hpp"

namespace pnmdi {

Vector charlie_vector(std::size_t n_max, std::size_t c, std::size_t j) {
  if (c > 2 * n_max || j > c) throw DomainError("Charlie outcome out of range");
  const std::size_t m = n_max + 1;
  Vector phi = Vector::Zero(static_cast<Eigen::Index>(m * m));
  const double norm = 1.0 / std::sqrt(static_cast<double>(c + 1));
  const double step = 2.0 * std::numbers::pi / static_cast<double>(c + 1);
  for (std::size_t n = 0; n <= c; ++n) {
    const std::size_t other = c - n;
    if (n >= m || other >= m) continue;
    // reduce n*j mod (c+1) so the phase stays exact for large products
    const double angle = step * static_cast<double>((n * j) % (c + 1));
    phi(static_cast<Eigen::Index>(n * m + other)) = norm * std::polar(1.0, angle);
  }
  return phi;
}

CharliePovm::CharliePovm(std::size_t n_max) : n_max_(n_max) {
  if (n_max < 1) throw DomainError("n_max must be at least 1");
  for (std::size_t c = 0; c <= 2 * n_max; ++c) {
    for (std::size_t j = 0; j <= c; ++j) outcomes_.push_back({c, j, charlie_vector(n_max, c, j)});
  }
}

const CharlieOutcome& CharliePovm::outcome(std::size_t c, std::size_t j) const {
  if (c > 2 * n_max_ || j > c) throw DomainError("Charlie outcome out of range");
  // outcomes are stored c-major with c + 1 entries per c
  return outcomes_[c * (c + 1) / 2 + j];
}

Matrix CharliePovm::resolution() const {
  const auto n = static_cast<Eigen::Index>(dim() * dim());
  Matrix sum = Matrix::Zero(n, n);
  for (const auto& o : outcomes_) sum += o.op();
  return sum;
}

CharliePovm charlie_povm(std::size_t n_max) { return CharliePovm(n_max); }

Matrix pnrd_projector(std::size_t n, std::size_t dim) {
  if (n >= dim) throw CutoffError("photon number exceeds detector space");
  Matrix p = Matrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  p(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n)) = 1.0;
  return p;
}

std::vector<SeparableOutcome> separable_measurement(std::size_t n_max) {
  const std::size_t m = n_max + 1;
  std::vector<SeparableOutcome> out;
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = 0; b < m; ++b) {
      Matrix op = Matrix::Zero(static_cast<Eigen::Index>(m * m), static_cast<Eigen::Index>(m * m));
      op(static_cast<Eigen::Index>(a * m + b), static_cast<Eigen::Index>(a * m + b)) = 1.0;
      out.push_back({a, b, std::move(op)});
    }
  }
  return out;
}

FockVector diagonal_check_state(std::size_t n_max) {
  const auto m = static_cast<Eigen::Index>(n_max + 1);
  return FockVector(ModeDims{n_max + 1}, Vector::Constant(m, 1.0 / std::sqrt(static_cast<double>(m))));
}

std::string to_string(SenderChoice s) { return s == SenderChoice::key ? "K" : "+"; }

namespace {

DensityOperator sender_state(std::size_t n_max, SenderChoice s) {
  const auto m = static_cast<Eigen::Index>(n_max + 1);
  if (s == SenderChoice::check) return DensityOperator::from_pure(diagonal_check_state(n_max));
  // key states in the prepare-and-measure picture: uniform Fock mixture
  return DensityOperator(ModeDims{n_max + 1}, Matrix::Identity(m, m) / static_cast<double>(m));
}

}  // namespace

CheckStateStatistics check_state_statistics(std::size_t n_max, SenderChoice alice, SenderChoice bob, std::size_t c) {
  if (c > 2 * n_max) throw DomainError("total photon number exceeds 2 n_max");
  const DensityOperator rho = tensor(sender_state(n_max, alice), sender_state(n_max, bob));
  const ModeList both{0, 1};

  CheckStateStatistics stats{n_max, alice, bob, c, {}, {}, {}};
  for (std::size_t j = 0; j <= c; ++j) {
    const Vector phi = charlie_vector(n_max, c, j);
    stats.nonseparable.push_back(apply_measurement(rho, phi * phi.adjoint(), both).probability);
  }
  for (const auto& o : separable_measurement(n_max)) {
    if (o.n_a + o.n_b != c) continue;
    stats.separable_labels.push_back({o.n_a, o.n_b});
    stats.separable.push_back(apply_measurement(rho, o.op, both).probability);
  }
  return stats;
}

MubSet mub_bases(std::size_t m) {
  if (m != 2) throw UnsupportedDimension("mutually unbiased bases are only provided for m = 2");
  const double r = 1.0 / std::sqrt(2.0);
  const Complex i(0.0, 1.0);
  auto vec = [](Complex a, Complex b) {
    Vector v(2);
    v << a, b;
    return v;
  };
  MubSet set{2, {}};
  set.bases.push_back({vec(r, r), vec(r, -r)});                 // X
  set.bases.push_back({vec(r, i * r), vec(r, -i * r)});         // Y
  set.bases.push_back({vec(1.0, 0.0), vec(0.0, 1.0)});          // Z
  return set;
}

PreparedCheckStates prepared_check_states(double eps0, double eps1) {
  if (!(eps0 >= 0.0 && eps1 >= 0.0) || std::abs(eps0 + eps1 - 1.0) > 1e-9) {
    throw DomainError("check-state weights must be nonnegative and sum to 1");
  }
  const double s0 = std::sqrt(eps0), s1 = std::sqrt(eps1);
  const Complex i(0.0, 1.0);
  auto qubit = [](Complex a, Complex b) {
    Vector v(2);
    v << a, b;
    return FockVector(ModeDims{2}, std::move(v));
  };
  return {qubit(s0, s1),      qubit(s0, -s1),     qubit(s0, -i * s1),
          qubit(s0, i * s1),  qubit(1.0, 0.0),    qubit(0.0, 1.0)};
}

}  // namespace pnmdi
