#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "pnmdi/errors.hpp"
#include "pnmdi/protocol.hpp"
#include "pnmdi/tomography.hpp"

using namespace pnmdi;

namespace {

DensityOperator two_qubit(const Matrix& rho) { return DensityOperator(ModeDims{2, 2}, rho); }

DensityOperator psi_plus() {
  Vector v = Vector::Zero(4);
  v(1) = v(2) = 1.0 / std::sqrt(2.0);
  return DensityOperator::from_pure(FockVector(ModeDims{2, 2}, v));
}

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST(Tables, BellStateCorrelations) {
  const auto t = exact_tables(psi_plus());
  const ProbTable& zz = t[2][2];
  EXPECT_NEAR(zz.at({0, 1}) + zz.at({1, 0}), 1.0, 1e-14);
  const ProbTable& xx = t[0][0];
  EXPECT_NEAR(xx.at({0, 0}) + xx.at({1, 1}), 1.0, 1e-14);
  for (const auto& row : t) {
    for (const auto& tab : row) EXPECT_NEAR(tab.total(), 1.0, 1e-14);
  }
  const Real33 r = correlation_coefficients(t);
  EXPECT_NEAR(r[0][0], 1.0, 1e-14);
  EXPECT_NEAR(r[1][1], 1.0, 1e-14);
  EXPECT_NEAR(r[2][2], -1.0, 1e-14);
  EXPECT_NEAR(r[0][2], 0.0, 1e-14);
  const Singles s = singles_coefficients(t);
  for (int j = 0; j < 3; ++j) {
    EXPECT_NEAR(s.a[j], 0.0, 1e-14);
    EXPECT_NEAR(s.b[j], 0.0, 1e-14);
  }
}

TEST(Tables, ProductStateFactorizes) {
  // |0> (x) |+>: a = (0,0,1), b = (1,0,0)
  Vector v(4);
  v << 1, 1, 0, 0;
  const auto rec = exact_statistics(DensityOperator::from_pure(FockVector(ModeDims{2, 2}, v.normalized())));
  EXPECT_NEAR(rec.a[2], 1.0, 1e-14);
  EXPECT_NEAR(rec.b[0], 1.0, 1e-14);
  for (int j = 0; j < 3; ++j) {
    for (int k = 0; k < 3; ++k) EXPECT_NEAR(rec.r[j][k], rec.a[j] * rec.b[k], 1e-14);
  }
  EXPECT_FALSE(rec.shots_per_pair.has_value());
}

TEST(ReconstructionProperty, ExactRoundTrip) {
  std::mt19937_64 rng(101);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix rho = oracle::random_density(4, rng, 1 + trial % 4);
    const DensityOperator back = reconstruct_state(exact_statistics(two_qubit(rho)));
    EXPECT_LT(max_abs(back.matrix() - rho), 1e-12);
  }
}

TEST(ReconstructionProperty, HolevoMatchesDirect) {
  std::mt19937_64 rng(103);
  for (int trial = 0; trial < 10; ++trial) {
    const Matrix rho = oracle::random_density(4, rng);
    EXPECT_NEAR(eve_bound_from_tomography(exact_statistics(two_qubit(rho))), holevo_eve(two_qubit(rho)), 1e-10);
  }
}

TEST(Reconstruction, RejectsUnphysicalExactRecord) {
  TomographyRecord rec;
  rec.r = {{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};  // all-plus correlations have no two-qubit state
  EXPECT_THROW(reconstruct_state(rec), NumericalIntegrityError);
  rec.shots_per_pair = 100;
  const DensityOperator fixed = reconstruct_state(rec);
  EXPECT_NEAR(fixed.matrix().trace().real(), 1.0, 1e-12);
  EXPECT_GE(Eigen::SelfAdjointEigenSolver<Matrix>(fixed.matrix()).eigenvalues().minCoeff(), -1e-12);
}

TEST(Sampling, DeterministicPerSeed) {
  const auto a = sample_statistics(psi_plus(), 500, 7);
  const auto b = sample_statistics(psi_plus(), 500, 7);
  const auto c = sample_statistics(psi_plus(), 500, 8);
  EXPECT_EQ(a.r, b.r);
  EXPECT_EQ(a.a, b.a);
  EXPECT_NE(a.r, c.r);
  EXPECT_EQ(a.shots_per_pair, std::optional<std::uint64_t>(500));
  EXPECT_THROW(sample_statistics(psi_plus(), 0, 1), DomainError);
}

TEST(Sampling, ConvergesWithShots) {
  std::mt19937_64 rng(107);
  const Matrix rho = oracle::random_density(4, rng);
  const auto exact = exact_statistics(two_qubit(rho));
  for (std::uint64_t shots : {1000u, 10000u, 1000000u}) {
    const auto s = sample_statistics(two_qubit(rho), shots, 11);
    double worst = 0.0;
    for (int j = 0; j < 3; ++j) {
      for (int k = 0; k < 3; ++k) worst = std::max(worst, std::abs(s.r[j][k] - exact.r[j][k]));
    }
    // five standard errors of a +-1 estimator
    EXPECT_LT(worst, 5.0 / std::sqrt(double(shots))) << shots;
  }
}

TEST(Sampling, HeraldedStateBoundConverges) {
  const CoefficientVector c{0.8575, 0.1425};
  const auto cs = conditional_state(c, c, ChannelParams::symmetric(50.0), 1);
  const double direct = holevo_eve(cs.rho);
  const double sampled = eve_bound_from_tomography(sample_statistics(cs.rho, 1000000, 3));
  EXPECT_NEAR(sampled, direct, 0.02);
}
