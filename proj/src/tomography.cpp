#include "pnmdi/tomography.hpp"

#include <algorithm>
#include <functional>
#include <random>

#include "pnmdi/errors.hpp"
#include "pnmdi/protocol.hpp"

namespace pnmdi {

namespace {

constexpr double kExactNegativityLimit = 1e-6;

void check_qubits(const DensityOperator& rho) {
  if (rho.dims() != ModeDims{2, 2}) throw UnsupportedDimension("tomography is implemented for two qubits");
}

std::array<Matrix, 4> paulis() {
  Matrix i = Matrix::Identity(2, 2), x(2, 2), y(2, 2), z(2, 2);
  x << 0, 1, 1, 0;
  y << 0, Complex(0, -1), Complex(0, 1), 0;
  z << 1, 0, 0, -1;
  return {i, x, y, z};
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index r = 0; r < a.rows(); ++r) {
    for (Eigen::Index s = 0; s < a.cols(); ++s) out.block(r * b.rows(), s * b.cols(), b.rows(), b.cols()) = a(r, s) * b;
  }
  return out;
}

BasisTables tables_from(const std::function<ProbTable(std::size_t, std::size_t)>& make) {
  // ProbTable has no default constructor; fill via a lambda per slot
  auto row = [&](std::size_t j) {
    return std::array<ProbTable, 3>{make(j, 0), make(j, 1), make(j, 2)};
  };
  return {row(0), row(1), row(2)};
}

}  // namespace

ProbTable measurement_probabilities(const DensityOperator& rho_ab, PauliBasis basis_a, PauliBasis basis_b) {
  check_qubits(rho_ab);
  const MubSet mub = mub_bases(2);
  const auto& ea = mub.bases[static_cast<std::size_t>(basis_a)];
  const auto& eb = mub.bases[static_cast<std::size_t>(basis_b)];
  std::vector<double> p;
  for (const auto& u : ea) {
    for (const auto& v : eb) {
      Vector uv(4);
      for (Eigen::Index r = 0; r < 2; ++r) {
        for (Eigen::Index s = 0; s < 2; ++s) uv(r * 2 + s) = u(r) * v(s);
      }
      p.push_back(std::max(0.0, (uv.adjoint() * rho_ab.matrix() * uv)(0, 0).real()));
    }
  }
  return ProbTable({{"a", 2}, {"b", 2}}, std::move(p));
}

BasisTables exact_tables(const DensityOperator& rho_ab) {
  return tables_from([&](std::size_t j, std::size_t k) {
    return measurement_probabilities(rho_ab, static_cast<PauliBasis>(j), static_cast<PauliBasis>(k));
  });
}

Singles singles_coefficients(const BasisTables& tables) {
  Singles s{};
  for (std::size_t j = 0; j < 3; ++j) {
    for (std::size_t k = 0; k < 3; ++k) {
      const ProbTable pa = tables[j][k].marginal({0});
      const ProbTable pb = tables[k][j].marginal({1});
      s.a[j] += (pa.at({0}) - pa.at({1})) / 3.0;
      s.b[j] += (pb.at({0}) - pb.at({1})) / 3.0;
    }
  }
  return s;
}

Real33 correlation_coefficients(const BasisTables& tables) {
  Real33 r{};
  for (std::size_t j = 0; j < 3; ++j) {
    for (std::size_t k = 0; k < 3; ++k) {
      const ProbTable& t = tables[j][k];
      r[j][k] = t.at({0, 0}) + t.at({1, 1}) - t.at({0, 1}) - t.at({1, 0});
    }
  }
  return r;
}

TomographyRecord exact_statistics(const DensityOperator& rho_ab) {
  const BasisTables t = exact_tables(rho_ab);
  const Singles s = singles_coefficients(t);
  return {s.a, s.b, correlation_coefficients(t), std::nullopt};
}

DensityOperator reconstruct_state(const TomographyRecord& record) {
  const auto p = paulis();
  Matrix rho = kron(p[0], p[0]);
  for (std::size_t j = 0; j < 3; ++j) {
    rho += record.a[j] * kron(p[j + 1], p[0]);
    rho += record.b[j] * kron(p[0], p[j + 1]);
    for (std::size_t k = 0; k < 3; ++k) rho += record.r[j][k] * kron(p[j + 1], p[k + 1]);
  }
  rho /= 4.0;
  rho = 0.5 * (rho + rho.adjoint()).eval();

  Eigen::SelfAdjointEigenSolver<Matrix> eig(rho);
  const double lowest = eig.eigenvalues().minCoeff();
  if (lowest < 0.0) {
    if (!record.shots_per_pair) {
      if (lowest < -kExactNegativityLimit) {
        throw NumericalIntegrityError("exact tomography record reconstructs a non-physical state");
      }
    }
    // nearest PSD matrix in Frobenius norm, then back to unit trace
    Eigen::VectorXd w = eig.eigenvalues().cwiseMax(0.0);
    w /= w.sum();
    rho = eig.eigenvectors() * w.cast<Complex>().asDiagonal() * eig.eigenvectors().adjoint();
  }
  return DensityOperator(ModeDims{2, 2}, rho);
}

double eve_bound_from_tomography(const TomographyRecord& record) { return holevo_eve(reconstruct_state(record)); }

TomographyRecord sample_statistics(const DensityOperator& rho_ab, std::uint64_t shots_per_pair, std::uint64_t seed) {
  if (shots_per_pair < 1) throw DomainError("at least one shot per basis pair is required");
  const BasisTables exact = exact_tables(rho_ab);
  std::mt19937_64 rng(seed);
  const BasisTables sampled = tables_from([&](std::size_t j, std::size_t k) {
    const auto v = exact[j][k].values();
    std::discrete_distribution<std::size_t> pick(v.begin(), v.end());
    std::vector<double> counts(4, 0.0);
    for (std::uint64_t s = 0; s < shots_per_pair; ++s) counts[pick(rng)] += 1.0;
    for (double& c : counts) c /= static_cast<double>(shots_per_pair);
    return ProbTable({{"a", 2}, {"b", 2}}, std::move(counts));
  });
  const Singles s = singles_coefficients(sampled);
  return {s.a, s.b, correlation_coefficients(sampled), shots_per_pair};
}

}  // namespace pnmdi
