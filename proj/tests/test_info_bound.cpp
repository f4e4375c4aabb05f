#include "eacomm/info_bound.hpp"
#include "eacomm/seesaw.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace eacomm {
namespace {

EaQuantumStrategy random_quantum(int nx, int d, int dB, std::mt19937_64& rng) {
  EaQuantumStrategy s;
  s.dA = d;
  s.dB = dB;
  s.shared_state = random_pure_state(d * dB, rng);
  for (int x = 0; x < nx; ++x) s.channels.push_back(KrausChannel::unitary(random_unitary(d, rng)));
  s.measurements.push_back(random_projective_povm(d * dB, 2, rng));
  return s;
}

EaClassicalStrategy random_classical(int nx, int d, int dA, int dB, std::mt19937_64& rng) {
  EaClassicalStrategy s;
  s.dA = dA;
  s.dB = dB;
  s.shared_state = random_pure_state(dA * dB, rng);
  for (int x = 0; x < nx; ++x) s.alice.push_back(random_projective_povm(dA, d, rng));
  s.bob.resize(1);
  for (int c = 0; c < d; ++c) s.bob[0].push_back(random_projective_povm(dB, 2, rng));
  return s;
}

TEST(Info, DenseCodingTwoBits) {
  const Ensemble e = ensemble_of(to_state_form(dense_coding()));
  const Guessing g = guessing_probability(e);
  EXPECT_NEAR(g.p_guess, 1.0, 1e-6);
  EXPECT_NEAR(g.attained, 1.0, 1e-6);
  EXPECT_NEAR(information(e, g), 2.0, 1e-6);
}

TEST(Info, ChshEaBitOneBit) {
  const EaClassicalStateForm f = to_state_form(chsh_ea_bit());
  EXPECT_LE(information(ensemble_of(f)), 1.0 + 1e-6);
  EXPECT_EQ(schmidt_number_bound(f), 1);
}

TEST(Info, HelstromBiasedPriors) {
  std::mt19937_64 rng(71);
  for (double p : {0.2, 0.5, 0.65}) {
    const ComplexMatrix r0 = random_density(2, rng), r1 = random_density(2, rng);
    Ensemble e{{p, 1 - p}, {DensityOperator(r0), DensityOperator(r1)}};
    const double helstrom = 0.5 * (1 + trace_norm(p * r0 - (1 - p) * r1));
    const Guessing g = guessing_probability(e);
    EXPECT_NEAR(g.p_guess, helstrom, 1e-6);
    EXPECT_NEAR(information(e, g), -std::log2(std::max(p, 1 - p)) + std::log2(helstrom), 1e-5);
  }
}

TEST(Info, DimensionBoundFormula) {
  EXPECT_DOUBLE_EQ(info_dimension_bound(1, 2), 1.0);
  EXPECT_DOUBLE_EQ(info_dimension_bound(2, 2), 2.0);
  EXPECT_NEAR(info_dimension_bound(3, 3), 2 * std::log2(3.0), 1e-12);
}

TEST(Info, EnsembleValidation) {
  EXPECT_THROW((Ensemble{{0.5, 0.4}, {DensityOperator(identity(2) / 2.0), DensityOperator(identity(2) / 2.0)}}.validate()),
               std::invalid_argument);
  EXPECT_THROW((Ensemble{{1.0}, {}}.validate()), std::invalid_argument);
}

TEST(Info, RandomClassicalStrategiesBelowLogD) {
  std::mt19937_64 rng(72);
  for (int d : {2, 3})
    for (int t = 0; t < 10; ++t) {
      const EaClassicalStateForm f = to_state_form(random_classical(4, d, d, 2, rng));
      const Ensemble e = ensemble_of(f);
      EXPECT_LE(information(e), std::log2(d) + 1e-6);
      EXPECT_LE(information(e), info_dimension_bound(schmidt_number_bound(f), d) + 1e-6);
    }
}

TEST(Info, RandomQuantumStrategiesBelowTwoLogD) {
  std::mt19937_64 rng(73);
  for (int d : {2, 3})
    for (int t = 0; t < 10; ++t) {
      const EaQuantumStateForm f = to_state_form(random_quantum(5, d, d, rng));
      const Ensemble e = ensemble_of(f);
      const int k = schmidt_number_bound(f);
      EXPECT_LE(k, d);
      EXPECT_LE(information(e), info_dimension_bound(k, d) + 1e-6);
      EXPECT_LE(information(e), 2 * std::log2(d) + 1e-6);
    }
}

TEST(Info, SeesawStrategiesRespectBounds) {
  SeesawConfig c;
  c.D = 2;
  c.restarts = 2;
  c.seed = 3;
  const auto q = seesaw_quantum(catalog("w_5"), 2, c);
  EXPECT_LE(information(ensemble_of(q.strategy)), 2.0 + 1e-6);
  const auto cl = seesaw_classical(catalog("w_rac"), 2, c);
  EXPECT_LE(information(ensemble_of(cl.strategy)), 1.0 + 1e-6);
}

TEST(Info, UniformPriorDominance) {
  std::mt19937_64 rng(74);
  std::uniform_real_distribution<double> u(0.05, 1.0);
  for (int t = 0; t < 10; ++t) {
    std::vector<double> pr = {u(rng), u(rng), u(rng)};
    const double s = pr[0] + pr[1] + pr[2];
    for (auto& p : pr) p /= s;
    Ensemble e{pr, {DensityOperator(random_density(2, rng)), DensityOperator(random_density(2, rng)),
                    DensityOperator(random_density(2, rng))}};
    EXPECT_TRUE(uniform_prior_dominance_check(e));
  }
}

TEST(Info, SchmidtNumberOfPureStates) {
  EXPECT_EQ(schmidt_number_bound(to_state_form(dense_coding())), 2);
  EaQuantumStrategy s = dense_coding();
  s.shared_state = PureState::basis(4, 0);
  EXPECT_EQ(schmidt_number_bound(to_state_form(s)), 1);
}

}  // namespace
}  // namespace eacomm
