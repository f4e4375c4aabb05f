#include "eacomm/qmat.hpp"

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include <cmath>

namespace eacomm {
namespace {

constexpr double kTol = 1e-10;

ComplexMatrix random_matrix(int r, int c, std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  ComplexMatrix m(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) m(i, j) = cplx(n(rng), n(rng));
  return m;
}

// Pure state on C^dC (x) C^dB with exactly k nonzero Schmidt coefficients.
ComplexVector schmidt_rank_state(int dC, int dB, int k, std::mt19937_64& rng) {
  const ComplexMatrix u = random_unitary(dC, rng), v = random_unitary(dB, rng);
  std::uniform_real_distribution<double> w(0.1, 1.0);
  ComplexVector psi = ComplexVector::Zero(dC * dB);
  for (int i = 0; i < k; ++i) psi += w(rng) * kron(ComplexVector(u.col(i)), ComplexVector(v.col(i)));
  return psi.normalized();
}

TEST(Kron, IdentityTimesIdentity) { EXPECT_TRUE(kron(identity(2), identity(2)).isApprox(identity(4))); }

TEST(Kron, PauliXTimesPauliZ) {
  ComplexMatrix expect = ComplexMatrix::Zero(4, 4);
  expect(0, 2) = 1;
  expect(1, 3) = -1;
  expect(2, 0) = 1;
  expect(3, 1) = -1;
  EXPECT_TRUE(kron(pauli::X(), pauli::Z()).isApprox(expect));
}

TEST(Kron, BasisProjectors) {
  ComplexMatrix p0 = ComplexMatrix::Zero(2, 2), p1 = ComplexMatrix::Zero(2, 2);
  p0(0, 0) = 1;
  p1(1, 1) = 1;
  ComplexMatrix expect = ComplexMatrix::Zero(4, 4);
  expect(1, 1) = 1;
  EXPECT_TRUE(kron(p0, p1).isApprox(expect));
}

TEST(Kron, AssociativeAndMixedProduct) {
  std::mt19937_64 rng(1);
  for (int t = 0; t < 20; ++t) {
    ComplexMatrix a = random_matrix(2, 3, rng), b = random_matrix(3, 2, rng), c = random_matrix(2, 2, rng);
    EXPECT_LT((kron(kron(a, b), c) - kron(a, kron(b, c))).norm(), 1e-10);
    ComplexMatrix a2 = random_matrix(3, 2, rng), b2 = random_matrix(2, 3, rng);
    EXPECT_LT((kron(a, b) * kron(a2, b2) - kron(ComplexMatrix(a * a2), ComplexMatrix(b * b2))).norm(), 1e-9);
  }
}

TEST(PartialTrace, MaximallyEntangledMarginal) {
  ComplexMatrix m = partial_trace(phi_max().density(), 2, 2, Keep::B);
  EXPECT_TRUE(m.isApprox(identity(2) / 2.0));
}

TEST(PartialTrace, ProductState) {
  std::mt19937_64 rng(2);
  ComplexMatrix rho = random_density(3, rng), sigma = random_density(2, rng);
  sigma *= 0.4;
  EXPECT_LT((partial_trace(kron(rho, sigma), 3, 2, Keep::A) - rho * sigma.trace()).norm(), kTol);
}

TEST(PartialTrace, MaximallyMixed) {
  EXPECT_TRUE(partial_trace(identity(4) / 4.0, 2, 2, Keep::B).isApprox(identity(2) / 2.0));
}

TEST(PartialTrace, ComposesToFullTrace) {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 10; ++t) {
    ComplexMatrix m = random_matrix(6, 6, rng);
    EXPECT_NEAR(std::abs(partial_trace(m, 2, 3, Keep::B).trace() - m.trace()), 0.0, 1e-10);
    EXPECT_NEAR(std::abs(partial_trace(m, 2, 3, Keep::A).trace() - m.trace()), 0.0, 1e-10);
  }
}

TEST(PartialTrace, RejectsBadDims) { EXPECT_THROW(partial_trace(identity(4), 3, 2, Keep::A), DimensionError); }

TEST(TraceNorm, Basics) {
  EXPECT_NEAR(trace_norm(identity(3)), 3.0, kTol);
  EXPECT_NEAR(trace_norm(pauli::Z()), 2.0, kTol);
}

TEST(TraceNorm, UnitarilyInvariant) {
  std::mt19937_64 rng(4);
  for (int t = 0; t < 20; ++t) {
    ComplexMatrix m = random_matrix(4, 4, rng);
    ComplexMatrix u = random_unitary(4, rng), v = random_unitary(4, rng);
    EXPECT_NEAR(trace_norm(u * m * v), trace_norm(m), 1e-9);
  }
}

TEST(SchmidtRank, Examples) {
  EXPECT_EQ(schmidt_rank(PureState::basis(4, 0), 2, 2), 1);
  EXPECT_EQ(schmidt_rank(phi_max(), 2, 2), 2);
  // phi (x) phi is ordered A1 B1 A2 B2; regroup as (A1 A2 | B1 B2).
  const ComplexVector p = tensor(phi_max(), phi_max()).amplitudes();
  ComplexVector q(16);
  for (int a1 = 0; a1 < 2; ++a1)
    for (int b1 = 0; b1 < 2; ++b1)
      for (int a2 = 0; a2 < 2; ++a2)
        for (int b2 = 0; b2 < 2; ++b2) q((a1 * 2 + a2) * 4 + b1 * 2 + b2) = p(((a1 * 2 + b1) * 2 + a2) * 2 + b2);
  EXPECT_EQ(schmidt_rank(PureState(q), 4, 4), 4);
  Eigen::Map<const Eigen::Matrix<cplx, 4, 4, Eigen::RowMajor>> r(q.data());
  const ComplexMatrix rm = r;
  Eigen::JacobiSVD<ComplexMatrix> svd(rm);
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(svd.singularValues()(i), 0.5, 1e-12);
}

TEST(HermitianEig, SortedDescending) {
  HermitianEig e = hermitian_eig(pauli::Z());
  EXPECT_NEAR(e.values(0), 1.0, kTol);
  EXPECT_NEAR(e.values(1), -1.0, kTol);
  ComplexMatrix rho = ComplexMatrix::Zero(2, 2);
  rho(0, 0) = 0.25;
  rho(1, 1) = 0.75;
  e = hermitian_eig(rho);
  EXPECT_NEAR(e.values(0), 0.75, kTol);
  EXPECT_NEAR(e.values(1), 0.25, kTol);
}

TEST(HermitianEig, PauliXVectors) {
  HermitianEig e = hermitian_eig(pauli::X());
  EXPECT_NEAR(e.values(0), 1.0, kTol);
  const double s = 1 / std::sqrt(2.0);
  EXPECT_NEAR(std::abs(e.vectors(0, 0) - s), 0.0, 1e-10);
  EXPECT_NEAR(std::abs(e.vectors(1, 0) - s), 0.0, 1e-10);
  EXPECT_NEAR(std::abs(e.vectors(0, 1) - s), 0.0, 1e-10);
  EXPECT_NEAR(std::abs(e.vectors(1, 1) + s), 0.0, 1e-10);
}

TEST(HermitianEig, Reconstructs) {
  std::mt19937_64 rng(5);
  ComplexMatrix m = random_matrix(5, 5, rng);
  m = (m + m.adjoint()).eval();
  HermitianEig e = hermitian_eig(m);
  EXPECT_LT((e.vectors * e.values.cast<cplx>().asDiagonal() * e.vectors.adjoint() - m).norm(), 1e-8);
  EXPECT_LT((e.vectors.adjoint() * e.vectors - identity(5)).norm(), 1e-8);
  EXPECT_THROW(hermitian_eig(random_matrix(3, 3, rng)), std::invalid_argument);
}

TEST(Objects, InvariantsEnforced) {
  ComplexVector v(2);
  v << 1, 1;
  EXPECT_THROW(PureState{v}, std::invalid_argument);
  EXPECT_THROW(DensityOperator(pauli::Z()), std::invalid_argument);
  EXPECT_THROW(Povm({identity(2) * 0.5}), std::invalid_argument);
  EXPECT_THROW(KrausChannel({identity(2) * 0.5}), std::invalid_argument);
  EXPECT_NO_THROW(DensityOperator(identity(2) * 0.25, true));
}

TEST(Objects, RandomPovmAndChannels) {
  std::mt19937_64 rng(6);
  for (int t = 0; t < 20; ++t) {
    Povm p = random_projective_povm(5, 3, rng);
    EXPECT_LT(p.completeness_residual(), 1e-9);
    for (const auto& m : p.elements()) {
      EXPECT_TRUE(is_psd(m));
      EXPECT_LT((m * m - m).norm(), 1e-9);
    }
    KrausChannel u = KrausChannel::unitary(random_unitary(3, rng));
    ComplexMatrix rho = random_density(3, rng);
    ComplexMatrix out = u.apply(rho);
    EXPECT_NEAR(out.trace().real(), 1.0, 1e-10);
    EXPECT_TRUE(is_psd(out));
  }
}

// Tr[rho sigma] <= k Tr[rho_B sigma_B] for rho pure with Schmidt rank k.
TEST(SchmidtTraceInequality, RandomPureInstances) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> dim(1, 4);
  int checked = 0;
  for (int t = 0; t < 1200; ++t) {
    const int dC = dim(rng), dB = dim(rng);
    const int k = std::uniform_int_distribution<int>(1, std::min(dC, dB))(rng);
    const ComplexVector psi = schmidt_rank_state(dC, dB, k, rng);
    ASSERT_EQ(schmidt_rank(PureState(psi), dC, dB), k);
    const ComplexMatrix rho = projector(psi);
    const ComplexMatrix sigma = random_density(dC * dB, rng, std::uniform_int_distribution<int>(1, dC * dB)(rng));
    const double lhs = (rho * sigma).trace().real();
    const double rhs = k * (partial_trace(rho, dC, dB, Keep::B) * partial_trace(sigma, dC, dB, Keep::B)).trace().real();
    EXPECT_LE(lhs, rhs + 1e-9);
    ++checked;
  }
  EXPECT_GE(checked, 1000);
}

TEST(SchmidtTraceInequality, MixturesOfBoundedRank) {
  std::mt19937_64 rng(8);
  for (int t = 0; t < 300; ++t) {
    const int dC = 3, dB = 3, k = 2;
    ComplexMatrix rho = ComplexMatrix::Zero(9, 9);
    std::uniform_real_distribution<double> w(0.0, 1.0);
    for (int i = 0; i < 4; ++i) rho += w(rng) * projector(schmidt_rank_state(dC, dB, k, rng));
    rho /= rho.trace().real();
    const ComplexMatrix sigma = random_density(9, rng);
    const double lhs = (rho * sigma).trace().real();
    const double rhs = k * (partial_trace(rho, dC, dB, Keep::B) * partial_trace(sigma, dC, dB, Keep::B)).trace().real();
    EXPECT_LE(lhs, rhs + 1e-9);
  }
}

TEST(Json, MatrixRoundTrip) {
  std::mt19937_64 rng(9);
  ComplexMatrix m = random_matrix(2, 3, rng);
  EXPECT_TRUE(matrix_from_json(matrix_to_json(m)) == m);
}

}  // namespace
}  // namespace eacomm
