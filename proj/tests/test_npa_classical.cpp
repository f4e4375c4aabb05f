#include "eacomm/npa_classical.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace eacomm::npa {
namespace {

const double kSqrt2 = std::sqrt(2.0);

std::vector<double> chsh_coefficients() {
  std::vector<double> c;
  for (int x = 0; x < 2; ++x)
    for (int a = 0; a < 2; ++a)
      for (int y = 0; y < 2; ++y)
        for (int b = 0; b < 2; ++b) c.push_back((x && y ? -1.0 : 1.0) * (a == b ? 1.0 : -1.0));
  return c;
}

EaClassicalStrategy random_classical_strategy(int nx, int ny, int nb, int d, int dA, int dB, std::mt19937_64& rng) {
  EaClassicalStrategy s;
  s.dA = dA;
  s.dB = dB;
  s.shared_state = random_pure_state(dA * dB, rng);
  for (int x = 0; x < nx; ++x) s.alice.push_back(random_projective_povm(dA, d, rng));
  s.bob.resize(static_cast<size_t>(ny));
  for (auto& by : s.bob)
    for (int c = 0; c < d; ++c) by.push_back(random_projective_povm(dB, nb, rng));
  return s;
}

double psd_min_eigenvalue(const RealMatrix& m) {
  Eigen::SelfAdjointEigenSolver<RealMatrix> es(m);
  return es.eigenvalues().minCoeff();
}

TEST(NpaClassical, ChshTsirelson) {
  BellRelaxation rel = build_bell_relaxation({2, 2, 2, 2}, LevelSpec::parse("1"));
  bell_objective(rel, chsh_coefficients());
  const NpaResult r = solve_relaxation(rel.problem, "npa_classical", "1");
  EXPECT_EQ(r.matrix_size, 5);
  EXPECT_NEAR(r.report.value, 2 * kSqrt2, 1e-6);
  EXPECT_EQ(r.report.direction, BoundDirection::upper);
}

TEST(NpaClassical, ChshLevelTwoSameBound) {
  BellRelaxation rel = build_bell_relaxation({2, 2, 2, 2}, LevelSpec::parse("2"));
  bell_objective(rel, chsh_coefficients());
  EXPECT_NEAR(solve_relaxation(rel.problem, "npa_classical", "2").report.value, 2 * kSqrt2, 1e-6);
}

TEST(NpaClassical, RacQubitMessage) {
  const NpaResult r = solve_upper_bound(catalog("w_rac"), 2, LevelSpec::parse("1"));
  EXPECT_NEAR(r.report.value, 4 * kSqrt2, 1e-3);
  ASSERT_TRUE(r.report.hierarchy_level.has_value());
  EXPECT_EQ(*r.report.hierarchy_level, "1");
}

TEST(NpaClassical, RacTritMessage) {
  const NpaResult r = solve_upper_bound(catalog("w_rac"), 3, LevelSpec::parse("1+AB+AA"));
  EXPECT_NEAR(r.report.value, 6.828, 1e-3);
}

TEST(NpaClassical, RejectsHardConstraints) {
  EXPECT_THROW(solve_upper_bound(catalog("w_rac_flagged"), 2, LevelSpec::parse("1")), std::invalid_argument);
}

// Moments of explicit strategies are feasible points of the relaxation.
TEST(NpaClassical, RandomStrategiesAreFeasible) {
  std::mt19937_64 rng(41);
  const Witness w = catalog("w_rac");
  for (int d : {2, 3}) {
    BellRelaxation rel = build_relaxation(w.scenario, d, LevelSpec::parse("1+AB"));
    const LinearForm obj = witness_objective(rel, w.functional());
    for (int t = 0; t < 10; ++t) {
      const EaClassicalStrategy s = random_classical_strategy(4, 2, 2, d, d, 2, rng);
      const ComplexVector psi = s.shared_state.amplitudes();
      const std::vector<double> m = moments_from_operators(rel.problem, strategy_operators(rel, s), psi);
      EXPECT_GT(psd_min_eigenvalue(rel.problem.moment_matrix(m)), -1e-9);
      EXPECT_LT(rel.problem.max_equality_violation(m), 1e-9);
      EXPECT_GT(rel.problem.min_nonnegative(m), -1e-9);
      EXPECT_NEAR(obj.evaluate(m), evaluate_witness(w, simulate_classical(s)), 1e-9);
    }
  }
}

// Letter operators assembled here from the protocol's POVMs, not through
// strategy_operators.
TEST(NpaClassical, RacObjectiveAtChshMoments) {
  const EaClassicalStrategy s = chsh_ea_bit();
  BellRelaxation rel = build_relaxation(catalog("w_rac").scenario, 2, LevelSpec::parse("1"));
  const LinearForm obj = witness_objective(rel, catalog("w_rac").functional());
  std::vector<ComplexMatrix> ops(static_cast<size_t>(rel.algebra->num_letters()));
  for (int x = 0; x < 4; ++x) ops[static_cast<size_t>(rel.algebra->alice_letter(x, 0))] = kron(s.alice[x][0], identity(s.dB));
  for (int y = 0; y < 2; ++y)
    for (int c = 0; c < 2; ++c) ops[static_cast<size_t>(rel.algebra->bob_letter(2 * y + c, 0))] = kron(identity(s.dA), s.bob[y][c][0]);
  const std::vector<double> m = moments_from_operators(rel.problem, ops, s.shared_state.amplitudes());
  EXPECT_NEAR(obj.evaluate(m), 4 * kSqrt2, 1e-9);
}

TEST(NpaClassical, LevelMonotonicity) {
  std::mt19937_64 rng(42);
  std::normal_distribution<double> n;
  for (int t = 0; t < 3; ++t) {
    Functional f(3, 2, 2);
    for (auto& c : f.coeffs) c = n(rng);
    double prev = 1e300;
    for (const char* lvl : {"1", "1+AB", "2"}) {
      const double v = solve_upper_bound(f, 2, LevelSpec::parse(lvl)).report.value;
      EXPECT_LE(v, prev + 1e-6) << lvl;
      prev = v;
    }
    // Sandwich: classical no-entanglement optimum <= outer bound.
    EXPECT_GE(prev, classical_bound_bruteforce(f, 2) - 1e-6);
  }
}

TEST(NpaClassical, SandwichOnExplicitStrategies) {
  std::mt19937_64 rng(43);
  const Witness w = catalog("w_5");
  const double upper = solve_upper_bound(w, 2, LevelSpec::parse("1")).report.value;
  for (int t = 0; t < 20; ++t) {
    const EaClassicalStrategy s = random_classical_strategy(5, 4, 2, 2, 2, 2, rng);
    EXPECT_LE(evaluate_witness(w, simulate_classical(s)), upper + 1e-6);
  }
  EXPECT_GE(upper, classical_bound_bruteforce(w, 2));
}

TEST(NpaClassical, ProbabilityNormalization) {
  BellRelaxation rel = build_bell_relaxation({2, 3, 2, 2}, LevelSpec::parse("1"));
  LinearForm total;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 2; ++b) {
      const LinearForm p = rel.probability(1, a, 0, b);
      total.constant += p.constant;
      total.terms.insert(total.terms.end(), p.terms.begin(), p.terms.end());
    }
  total.normalize();
  EXPECT_DOUBLE_EQ(total.constant, 1.0);
  EXPECT_TRUE(total.terms.empty());
}

}  // namespace
}  // namespace eacomm::npa
