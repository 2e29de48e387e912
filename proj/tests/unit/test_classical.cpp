#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "pnmdi/classical.hpp"
#include "pnmdi/errors.hpp"
#include "pnmdi/fixtures.hpp"
#include "pnmdi/protocol.hpp"

using namespace pnmdi;

TEST(Arrival, BinomialThinning) {
  const CoefficientVector p{0.5, 0.5};
  const auto full = classical_arrival_prob(p, 1.0);
  EXPECT_DOUBLE_EQ(full[1], 0.5);
  const auto t6 = classical_arrival_prob(p, 0.6);
  EXPECT_NEAR(t6[1], 0.3, 1e-15);
  EXPECT_NEAR(t6[0], 0.7, 1e-15);
  const auto none = classical_arrival_prob(CoefficientVector{0.2, 0.3, 0.5}, 0.0);
  EXPECT_DOUBLE_EQ(none[0], 1.0);
}

TEST(CharlieDistribution, Limits) {
  const CoefficientVector one{0.0, 1.0};
  EXPECT_DOUBLE_EQ(classical_charlie_prob({one, one, 1.0})[2], 1.0);
  const CoefficientVector p{0.3, 0.7};
  EXPECT_DOUBLE_EQ(classical_charlie_prob({p, p, 0.0})[0], 1.0);
}

TEST(AbTable, SupportAndNormalization) {
  const CoefficientVector p{0.2, 0.3, 0.5};
  const ClassicalModel m{p, p, 1.0};
  const ProbTable t = classical_ab_table(m, 2);
  EXPECT_NEAR(t.total(), 1.0, 1e-12);
  for (std::size_t a = 0; a < 3; ++a) {
    for (std::size_t b = 0; b < 3; ++b) {
      if (a + b != 2) EXPECT_EQ(t.at({a, b}), 0.0);
    }
  }
  EXPECT_THROW(classical_ab_table({CoefficientVector{1.0, 0.0}, CoefficientVector{1.0, 0.0}, 0.5}, 1), DomainError);
}

TEST(AbTable, HandEvaluatedSinglePhoton) {
  // weights for n_c = 1 at tau = 1/2 and uniform priors
  const CoefficientVector p{0.5, 0.5};
  const ProbTable t = classical_ab_table({p, p, 0.5}, 1);
  const double w01 = 0.5 * 0.25, w10 = w01, w11 = 2 * 0.5 * 0.5 * 0.25;
  const double z = w01 + w10 + w11;
  EXPECT_NEAR(t.at({0, 1}), w01 / z, 1e-15);
  EXPECT_NEAR(t.at({1, 1}), w11 / z, 1e-15);
  EXPECT_EQ(t.at({0, 0}), 0.0);
}

TEST(AbeTable, MarginalConsistencyAndLimits) {
  std::mt19937_64 rng(83);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t n = 1 + trial % 3;
    const ClassicalModel m{CoefficientVector(oracle::random_simplex(n + 1, rng)),
                           CoefficientVector(oracle::random_simplex(n + 1, rng)),
                           std::uniform_real_distribution<double>(0.05, 0.95)(rng)};
    for (std::size_t nc = 0; nc <= 2 * n; ++nc) {
      const ProbTable abe = classical_abe_table(m, nc);
      EXPECT_NEAR(abe.total(), 1.0, 1e-12);
      const ProbTable ab = classical_ab_table(m, nc);
      const ProbTable marg = abe.marginal({0, 1});
      for (std::size_t i = 0; i < ab.values().size(); ++i) EXPECT_NEAR(ab.values()[i], marg.values()[i], 1e-12);
    }
  }
  const CoefficientVector p{0.5, 0.5};
  const ProbTable lossless = classical_abe_table({p, p, 1.0}, 1);
  EXPECT_NEAR(lossless.marginal({2, 3}).at({0, 0}), 1.0, 1e-15);
  const ProbTable lost = classical_abe_table({p, p, 0.5}, 0);
  for (std::size_t a = 0; a < 2; ++a) {
    for (std::size_t b = 0; b < 2; ++b) {
      for (std::size_t ea = 0; ea < 2; ++ea) {
        for (std::size_t eb = 0; eb < 2; ++eb) {
          if (ea != a || eb != b) EXPECT_EQ(lost.at({a, b, ea, eb}), 0.0);
        }
      }
    }
  }
}

TEST(AbTableProperty, EqualsQuantumPhotonTable) {
  std::mt19937_64 rng(89);
  for (int trial = 0; trial < 9; ++trial) {
    const std::size_t n = 1 + trial % 3;
    const auto a = CoefficientVector(oracle::random_simplex(n + 1, rng));
    const auto b = CoefficientVector(oracle::random_simplex(n + 1, rng));
    const double t = std::uniform_real_distribution<double>(0.05, 0.95)(rng);
    for (std::size_t c = 0; c <= 2 * n; ++c) {
      const auto cs = conditional_state(a, b, ChannelParams{t, t, 0.0}, c);
      if (cs.is_zero()) continue;
      const ProbTable q = photon_number_table(cs.rho);
      const ProbTable k = classical_ab_table({a, b, t}, c);
      for (std::size_t i = 0; i < q.values().size(); ++i) EXPECT_NEAR(q.values()[i], k.values()[i], 1e-10);
    }
  }
}

TEST(Objective, Limits) {
  const CoefficientVector p{0.5, 0.5};
  // no loss: Eve learns nothing, objective is the average Alice-Bob information
  const double lossless = classical_objective({p, p, 1.0});
  EXPECT_NEAR(lossless, 0.5, 1e-12);
  EXPECT_LE(classical_objective({p, p, 0.0}, ClampPolicy::unclamped), 1e-12);
  EXPECT_NEAR(classical_objective({p, p, 0.0}), 0.0, 1e-15);
}

TEST(Objective, PublishedOptimumBeatsUniform) {
  const double tau_link = std::sqrt(transmissivity(100.0));
  const auto best = fixture(FixtureTable::table3).coefficients_at(100.0);
  const CoefficientVector uniform{0.5, 0.5};
  EXPECT_GT(classical_objective({best, best, tau_link}), classical_objective({uniform, uniform, tau_link}));
}

TEST(Objective, ClampNeverLowersValue) {
  std::mt19937_64 rng(97);
  for (int trial = 0; trial < 10; ++trial) {
    const auto p = CoefficientVector(oracle::random_simplex(3, rng));
    const double t = std::uniform_real_distribution<double>()(rng);
    EXPECT_GE(classical_objective({p, p, t}) + 1e-15, classical_objective({p, p, t}, ClampPolicy::unclamped));
  }
}

TEST(ObjectiveProperty, Deterministic) {
  const CoefficientVector p{0.4, 0.3, 0.2, 0.1};
  const double v = classical_objective({p, p, 0.3});
  for (int i = 0; i < 5; ++i) EXPECT_EQ(classical_objective({p, p, 0.3}), v);
}
