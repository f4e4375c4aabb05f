#include "eacomm/npa_quantum.hpp"

#include <gtest/gtest.h>

namespace eacomm::npa {
namespace {

// Unitary encodings on a maximally entangled or random pure state and
// projective measurements on C (x) B.
EaQuantumStrategy random_unitary_strategy(int nx, int ny, int nb, int d, int dB, std::mt19937_64& rng) {
  EaQuantumStrategy s;
  s.dA = d;
  s.dB = dB;
  s.shared_state = random_pure_state(d * dB, rng);
  for (int x = 0; x < nx; ++x) s.channels.push_back(KrausChannel::unitary(random_unitary(d, rng)));
  for (int y = 0; y < ny; ++y) s.measurements.push_back(random_projective_povm(d * dB, nb, rng));
  return s;
}

double min_eigenvalue(const RealMatrix& m) {
  Eigen::SelfAdjointEigenSolver<RealMatrix> es(m);
  return es.eigenvalues().minCoeff();
}

TEST(HybridAlgebra, LetterLayout) {
  HybridAlgebra a(3, 2, 3, 2, true);
  EXPECT_EQ(a.kept_outcomes(), 2);
  EXPECT_EQ(a.num_letters(), 2 * 3 * 2 + 2 * 2 * 4);
  EXPECT_EQ(a.adjoint_letter(a.u(1, 1)), a.ud(1, 1));
  EXPECT_EQ(a.adjoint_letter(a.m(1, 0, 0, 1)), a.m(1, 0, 1, 0));
  Word w = {a.m(0, 1, 0, 0), a.u(2, 1), a.ud(0, 0)};
  ASSERT_TRUE(a.canonicalize(w));
  EXPECT_EQ(w, (Word{a.u(2, 1), a.ud(0, 0), a.m(0, 1, 0, 0)}));
  EXPECT_EQ(HybridAlgebra(3, 2, 3, 2, false).kept_outcomes(), 3);
}

TEST(NpaQuantum, DenseCodingMomentsFeasible) {
  const Witness w = catalog("w_rac");
  HybridRelaxation rel = build_hybrid(w.scenario, 2, LevelSpec::parse("1"));
  const LinearForm obj = hybrid_objective(rel, w.functional());
  const EaQuantumStrategy s = dense_coding();
  const std::vector<double> m = moments_from_operators(rel.problem, hybrid_operators(rel, s), s.shared_state.amplitudes());
  EXPECT_GT(min_eigenvalue(rel.problem.moment_matrix(m)), -1e-9);
  EXPECT_LT(rel.problem.max_equality_violation(m), 1e-9);
  EXPECT_NEAR(obj.evaluate(m), 8.0, 1e-9);
  EXPECT_NEAR(solve_upper_bound_quantum(w, 2, LevelSpec::parse("1")).report.value, 8.0, 1e-4);
}

TEST(NpaQuantum, RandomStrategiesAreFeasible) {
  std::mt19937_64 rng(51);
  Functional f(3, 2, 3);
  std::normal_distribution<double> n;
  for (auto& c : f.coeffs) c = n(rng);
  Scenario sc{3, 2, 3, 2};
  for (bool elim : {true, false}) {
    HybridOptions ho;
    ho.eliminate_last_outcome = elim;
    HybridRelaxation rel = build_hybrid(sc, 2, LevelSpec::parse("1"), ho);
    const LinearForm obj = hybrid_objective(rel, f);
    for (int t = 0; t < 10; ++t) {
      const EaQuantumStrategy s = random_unitary_strategy(3, 2, 3, 2, 2, rng);
      const std::vector<double> m = moments_from_operators(rel.problem, hybrid_operators(rel, s), s.shared_state.amplitudes());
      EXPECT_GT(min_eigenvalue(rel.problem.moment_matrix(m)), -1e-9);
      EXPECT_LT(rel.problem.max_equality_violation(m), 1e-9);
      EXPECT_GT(rel.problem.min_nonnegative(m), -1e-9);
      EXPECT_NEAR(obj.evaluate(m), f.evaluate(simulate_quantum(s)), 1e-9);
    }
  }
}

TEST(NpaQuantum, ProbabilitiesMatchSimulator) {
  std::mt19937_64 rng(52);
  Scenario sc{2, 2, 2, 2};
  HybridRelaxation rel = build_hybrid(sc, 2, LevelSpec::parse("1"));
  const EaQuantumStrategy s = random_unitary_strategy(2, 2, 2, 2, 3, rng);
  const std::vector<double> m = moments_from_operators(rel.problem, hybrid_operators(rel, s), s.shared_state.amplitudes());
  const Behavior b = simulate_quantum(s);
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      for (int o = 0; o < 2; ++o) EXPECT_NEAR(rel.probability(x, y, o).evaluate(m), b.p(x, y, o), 1e-10);
}

TEST(NpaQuantum, LevelMonotonicityAndSandwich) {
  std::mt19937_64 rng(53);
  std::normal_distribution<double> n;
  Functional f(3, 2, 2);
  for (auto& c : f.coeffs) c = n(rng);
  const double l0 = solve_upper_bound_quantum(f, 2, LevelSpec::parse("0")).report.value;
  const double l1 = solve_upper_bound_quantum(f, 2, LevelSpec::parse("1")).report.value;
  EXPECT_LE(l1, l0 + 1e-6);
  EXPECT_LE(l0, f.algebraic_max() + 1e-6);
  for (int t = 0; t < 20; ++t) EXPECT_LE(f.evaluate(simulate_quantum(random_unitary_strategy(3, 2, 2, 2, 2, rng))), l1 + 1e-6);
  EXPECT_GE(l1, classical_bound_bruteforce(f, 2) - 1e-6);
}

TEST(NpaQuantum, RejectsHighKrausRank) {
  Scenario sc{1, 1, 2, 2};
  HybridRelaxation rel = build_hybrid(sc, 2, LevelSpec::parse("0"));
  EaQuantumStrategy s;
  s.dA = 1;
  s.dB = 1;
  s.shared_state = PureState::basis(1, 0);
  ComplexMatrix k0 = ComplexMatrix::Zero(2, 1), k1 = ComplexMatrix::Zero(2, 1);
  k0(0, 0) = std::sqrt(0.5);
  k1(1, 0) = std::sqrt(0.5);
  s.channels.emplace_back(std::vector<ComplexMatrix>{k0, k1});
  s.measurements.push_back(Povm({projector(PureState::basis(2, 0).amplitudes()), projector(PureState::basis(2, 1).amplitudes())}));
  EXPECT_THROW(hybrid_operators(rel, s), std::invalid_argument);
}

TEST(NpaQuantumSlow, W5QubitLevelOne) {
  const NpaResult r = solve_upper_bound_quantum(catalog("w_5"), 2, LevelSpec::parse("1"));
  EXPECT_GE(r.report.value, 13.036 - 1e-3);
  EXPECT_LE(r.report.value, 14.0 + 1e-3);
}

}  // namespace
}  // namespace eacomm::npa
