#include "eacomm/strategies.hpp"

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include <cmath>

namespace eacomm {
namespace {

const double kSqrt2 = std::sqrt(2.0);

// p(b|x,y) computed directly from Kraus operators and the shared state.
double direct_probability(const EaQuantumStrategy& s, int x, int y, int b) {
  const ComplexMatrix psi = s.shared_state.density();
  ComplexMatrix out = ComplexMatrix::Zero(s.d() * s.dB, s.d() * s.dB);
  for (const auto& k : s.channels[static_cast<size_t>(x)].kraus_ops()) {
    const ComplexMatrix kk = kron(k, identity(s.dB));
    out += kk * psi * kk.adjoint();
  }
  return (out * s.measurements[static_cast<size_t>(y)][b]).trace().real();
}

EaQuantumStrategy random_quantum_strategy(int nx, int ny, int nb, int d, int dA, int dB, std::mt19937_64& rng) {
  EaQuantumStrategy s;
  s.dA = dA;
  s.dB = dB;
  s.shared_state = random_pure_state(dA * dB, rng);
  for (int x = 0; x < nx; ++x) {
    // isometry A -> C (x) E restricted to d output dims, two Kraus operators
    const ComplexMatrix v = random_unitary(2 * d > dA ? 2 * d : dA, rng).leftCols(dA);
    ComplexMatrix k0 = v.topRows(d), k1 = v.middleRows(d, d);
    const ComplexMatrix sum = k0.adjoint() * k0 + k1.adjoint() * k1;
    const HermitianEig e = hermitian_eig(sum);
    ComplexMatrix inv_sqrt = e.vectors * e.values.cwiseSqrt().cwiseInverse().cast<cplx>().asDiagonal() * e.vectors.adjoint();
    s.channels.emplace_back(std::vector<ComplexMatrix>{k0 * inv_sqrt, k1 * inv_sqrt});
  }
  for (int y = 0; y < ny; ++y) s.measurements.push_back(random_projective_povm(d * dB, nb, rng));
  return s;
}

TEST(Strategies, FlaggedQubitValue) {
  const Behavior b = simulate_quantum(flagged_qubit_strategy());
  Witness w = catalog("w_rac_flagged");
  EXPECT_TRUE(check_constraints(w, b, 1e-12));
  for (int x = 0; x < 4; ++x) EXPECT_NEAR(b.correlator(x, 2), 1.0, 1e-12);
  EXPECT_NEAR(b.correlator(4, 2), -1.0, 1e-12);
  w.constraints.clear();
  EXPECT_NEAR(evaluate_witness(w, b), 2 * (1 + std::sqrt(5.0)), 1e-9);
}

TEST(Strategies, QuquartValues) {
  const Behavior b = simulate_quantum(ququart_strategy());
  EXPECT_NEAR(evaluate_witness(catalog("w_frac", 0.0), b), 2 * (2 + kSqrt2), 1e-9);
  EXPECT_NEAR(evaluate_witness(catalog("w_frac", 4.0), b), 38.8284, 1e-4);
}

TEST(Strategies, DenseCoding) {
  EXPECT_NEAR(evaluate_witness(catalog("w_rac"), simulate_quantum(dense_coding())), 8.0, 1e-12);
  const Behavior bell = simulate_quantum(dense_coding_bell());
  for (int x = 0; x < 4; ++x)
    for (int b = 0; b < 4; ++b) EXPECT_NEAR(bell.p(x, 0, b), x == b ? 1.0 : 0.0, 1e-12);
}

TEST(Strategies, ChshEaBit) {
  const EaClassicalStrategy s = chsh_ea_bit();
  EXPECT_NEAR(evaluate_witness(catalog("w_rac"), simulate_classical(s)), 4 * kSqrt2, 1e-9);
  // The embedded quantum strategy reproduces the same behavior.
  const Behavior a = simulate_classical(s), b = simulate_quantum(embed_classical(s));
  for (size_t i = 0; i < a.table().size(); ++i) EXPECT_NEAR(a.table()[i], b.table()[i], 1e-12);
}

TEST(Strategies, SimulatorMatchesDirectFormula) {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 20; ++t) {
    const EaQuantumStrategy s = random_quantum_strategy(3, 2, 3, 2, 2, 2, rng);
    const Behavior b = simulate_quantum(s);
    const Behavior c = simulate(to_state_form(s));
    for (int x = 0; x < 3; ++x)
      for (int y = 0; y < 2; ++y)
        for (int o = 0; o < 3; ++o) {
          EXPECT_NEAR(b.p(x, y, o), direct_probability(s, x, y, o), 1e-10);
          EXPECT_NEAR(c.p(x, y, o), b.p(x, y, o), 1e-10);
        }
  }
}

TEST(Strategies, StateFormsHaveCommonMarginal) {
  std::mt19937_64 rng(12);
  const EaQuantumStateForm f = to_state_form(random_quantum_strategy(4, 1, 2, 2, 3, 2, rng));
  EXPECT_LT(f.marginal_spread(), 1e-10);
  EXPECT_NO_THROW(f.validate());
  const EaClassicalStateForm c = to_state_form(chsh_ea_bit());
  EXPECT_LT(c.marginal_spread(), 1e-10);
  const Behavior a = simulate(c), b = simulate_classical(chsh_ea_bit()), e = simulate(embed_classical(c));
  for (size_t i = 0; i < a.table().size(); ++i) {
    EXPECT_NEAR(a.table()[i], b.table()[i], 1e-12);
    EXPECT_NEAR(e.table()[i], b.table()[i], 1e-12);
  }
}

TEST(Strategies, ValidationRejectsMismatch) {
  EaQuantumStrategy s = dense_coding();
  s.measurements.front() = Povm({identity(2)});
  EXPECT_ANY_THROW(s.validate());
  EaQuantumStateForm f = to_state_form(dense_coding());
  f.states[1] = DensityOperator(kron(ComplexMatrix(identity(2) / 2.0), ComplexMatrix((identity(2) + pauli::Z()) / 2.0)));
  EXPECT_ANY_THROW(f.validate());
}

TEST(Strategies, OptimalBinaryObservable) {
  std::mt19937_64 rng(13);
  for (int t = 0; t < 20; ++t) {
    ComplexMatrix h = random_density(4, rng) - random_density(4, rng);
    const BinaryObservable o = optimal_binary_observable(h);
    EXPECT_NEAR(o.value, trace_norm(h), 1e-10);
    EXPECT_NEAR(((o.povm[0] - o.povm[1]) * h).trace().real(), o.value, 1e-10);
    // Any other projective split does no better.
    const Povm r = random_projective_povm(4, 2, rng);
    EXPECT_LE(((r[0] - r[1]) * h).trace().real(), o.value + 1e-10);
  }
}

TEST(Strategies, CoarseGrain) {
  const Povm bell = dense_coding_bell().measurements.front();
  const Povm c = coarse_grain(bell, {0, 0, 1, 1}, 2);
  EXPECT_TRUE((c[0] + c[1]).isApprox(identity(4)));
  EXPECT_TRUE(c[0].isApprox(bell[0] + bell[1]));
}

TEST(Strategies, JsonRoundTrip) {
  const EaQuantumStateForm f = to_state_form(ququart_strategy());
  const EaQuantumStateForm g = quantum_state_form_from_json(to_json(f));
  const Behavior a = simulate(f), b = simulate(g);
  EXPECT_EQ(a.table(), b.table());
  const EaClassicalStateForm c = to_state_form(chsh_ea_bit());
  EXPECT_EQ(simulate(classical_state_form_from_json(to_json(c))).table(), simulate(c).table());
}

}  // namespace
}  // namespace eacomm
