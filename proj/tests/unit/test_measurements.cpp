#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "pnmdi/errors.hpp"
#include "pnmdi/measurements.hpp"

using namespace pnmdi;

TEST(CharliePovmTest, SinglePhotonOutcome) {
  const Vector phi = charlie_povm(1).outcome(1, 0).phi;
  const double s = 1.0 / std::sqrt(2.0);
  EXPECT_NEAR(phi(1).real(), s, 1e-15);  // |01>
  EXPECT_NEAR(phi(2).real(), s, 1e-15);  // |10>
}

TEST(CharliePovmTest, TwoPhotonPhases) {
  const Vector phi = charlie_povm(2).outcome(2, 1).phi;
  const double s = 1.0 / std::sqrt(3.0);
  const Complex w = std::polar(1.0, 2.0 * std::numbers::pi / 3.0);
  EXPECT_LT(std::abs(phi(2) - s), 1e-15);       // |02>
  EXPECT_LT(std::abs(phi(4) - s * w), 1e-15);   // |11>
  EXPECT_LT(std::abs(phi(6) - s * w * w), 1e-15);  // |20>, w^2 = e^{-2 pi i / 3}
}

TEST(CharliePovmProperty, CompleteAndIdempotent) {
  for (std::size_t n = 1; n <= 7; ++n) {
    const CharliePovm povm = charlie_povm(n);
    const auto dim = static_cast<Eigen::Index>((n + 1) * (n + 1));
    EXPECT_LT((povm.resolution() - Matrix::Identity(dim, dim)).cwiseAbs().maxCoeff(), 1e-12) << "n_max " << n;
    for (const auto& o : povm.outcomes()) {
      const Matrix p = o.op();
      // c > n_max elements are sub-normalized projections, scaled by the
      // number of in-range terms over c + 1
      const double kept = p.trace().real();
      EXPECT_LT((p * p - kept * p).cwiseAbs().maxCoeff(), 1e-12);
      if (o.c <= n) EXPECT_NEAR(kept, 1.0, 1e-12);
    }
  }
}

TEST(CharliePovmTest, MatchesIndependentConstruction) {
  for (std::size_t n = 1; n <= 3; ++n) {
    const CharliePovm povm = charlie_povm(n);
    for (const auto& o : povm.outcomes()) {
      EXPECT_LT((o.phi - oracle::charlie_ket(n, o.c, o.j)).cwiseAbs().maxCoeff(), 1e-14);
    }
  }
}

TEST(Pnrd, Projectors) {
  const DensityOperator plus =
      DensityOperator::from_pure(FockVector(ModeDims{2}, Vector::Constant(2, 1.0 / std::sqrt(2.0))));
  EXPECT_NEAR(apply_measurement(plus, pnrd_projector(0, 2), {0}).probability, 0.5, 1e-15);
  Matrix sum = Matrix::Zero(4, 4);
  for (std::size_t n = 0; n < 4; ++n) sum += pnrd_projector(n, 4);
  EXPECT_TRUE(sum.isApprox(Matrix::Identity(4, 4)));
  EXPECT_THROW(pnrd_projector(3, 3), CutoffError);

  const DensityOperator key = DensityOperator::from_pure(key_state(CoefficientVector{0.8575, 0.1425}));
  EXPECT_NEAR(apply_measurement(key, pnrd_projector(1, 2), {1}).probability, 0.1425, 1e-14);
}

TEST(Separable, CompleteAndPatterns) {
  const auto sep = separable_measurement(2);
  Matrix sum = Matrix::Zero(9, 9);
  for (const auto& o : sep) sum += o.op;
  EXPECT_TRUE(sum.isApprox(Matrix::Identity(9, 9)));

  const DensityOperator plusplus =
      DensityOperator::from_pure(tensor(diagonal_check_state(2), diagonal_check_state(2)));
  for (const auto& o : sep) EXPECT_NEAR(apply_measurement(plusplus, o.op, {0, 1}).probability, 1.0 / 9, 1e-15);

  const DensityOperator anti = DensityOperator::from_pure(FockVector(
      ModeDims{2, 2}, (Vector(4) << 0, 1 / std::sqrt(2.0), 1 / std::sqrt(2.0), 0).finished()));
  for (const auto& o : separable_measurement(1)) {
    const double expected = o.n_a + o.n_b == 1 ? 0.5 : 0.0;
    EXPECT_NEAR(apply_measurement(anti, o.op, {0, 1}).probability, expected, 1e-15);
  }
}

TEST(CheckStates, DiagonalState) {
  const FockVector p1 = diagonal_check_state(1);
  EXPECT_NEAR(p1.amp(0).real(), 1 / std::sqrt(2.0), 1e-15);
  const FockVector p2 = diagonal_check_state(2);
  for (Eigen::Index i = 0; i < 3; ++i) EXPECT_NEAR(p2.amp(i).real(), 1 / std::sqrt(3.0), 1e-15);
  EXPECT_TRUE(p2.is_normalized());
}

TEST(CheckStates, TableOnePattern) {
  using S = SenderChoice;
  for (S a : {S::key, S::check}) {
    for (S b : {S::key, S::check}) {
      const auto st = check_state_statistics(2, a, b);
      ASSERT_EQ(st.nonseparable.size(), 3u);
      ASSERT_EQ(st.separable.size(), 3u);
      for (double p : st.separable) EXPECT_NEAR(p, 1.0 / 9, 1e-12);
      if (a == S::check && b == S::check) {
        EXPECT_NEAR(st.nonseparable[0], 1.0 / 3, 1e-12);
        EXPECT_NEAR(st.nonseparable[1], 0.0, 1e-12);
        EXPECT_NEAR(st.nonseparable[2], 0.0, 1e-12);
      } else {
        for (double p : st.nonseparable) EXPECT_NEAR(p, 1.0 / 9, 1e-12);
      }
    }
  }
}

TEST(Mub, QubitBases) {
  const MubSet m = mub_bases(2);
  ASSERT_EQ(m.bases.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      for (const auto& u : m.bases[i]) {
        for (const auto& v : m.bases[j]) {
          const double ov = std::norm(u.dot(v));
          if (i != j) EXPECT_NEAR(ov, 0.5, 1e-10);
        }
      }
    }
    EXPECT_NEAR(std::norm(m.bases[i][0].dot(m.bases[i][1])), 0.0, 1e-15);
    EXPECT_NEAR(m.bases[i][0].norm(), 1.0, 1e-15);
  }
  EXPECT_THROW(mub_bases(3), UnsupportedDimension);
}

TEST(PreparedStates, Limits) {
  const auto half = prepared_check_states(0.5, 0.5);
  EXPECT_NEAR(half.plus_x.amp(1).real(), 1 / std::sqrt(2.0), 1e-15);
  const auto vac = prepared_check_states(1.0, 0.0);
  EXPECT_NEAR(std::abs(vac.plus_x.amp(0)), 1.0, 1e-15);
  EXPECT_NEAR(std::abs(vac.minus_x.amp(1)), 0.0, 1e-15);
  EXPECT_THROW(prepared_check_states(0.7, 0.7), DomainError);
}

TEST(PreparedStates, EntanglementBasedEquivalence) {
  // measuring A1 of the key state in a Pauli basis steers A2 into the
  // corresponding prepared state
  const double e0 = 0.7, e1 = 0.3;
  const FockVector key = key_state(CoefficientVector{e0, e1});
  const auto prepared = prepared_check_states(e0, e1);
  const MubSet mub = mub_bases(2);
  const FockVector* expected[3][2] = {{&prepared.plus_x, &prepared.minus_x},
                                      {&prepared.plus_y, &prepared.minus_y},
                                      {&prepared.plus_z, &prepared.minus_z}};
  const std::size_t a1[] = {0};
  for (std::size_t basis = 0; basis < 3; ++basis) {
    for (std::size_t s = 0; s < 2; ++s) {
      const FockVector steered = project_modes(key, mub.bases[basis][s], a1);
      if (steered.norm_squared() < 1e-15) continue;
      const Vector got = steered.amp.normalized();
      EXPECT_NEAR(std::norm(got.dot(expected[basis][s]->amp)), 1.0, 1e-12) << basis << s;
    }
  }
}
