#include "eacomm/hyperbit.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace eacomm {
namespace {

RealMatrix random_unit_columns(int dim, int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  RealMatrix m(dim, n);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = g(rng);
  m.colwise().normalize();
  return m;
}

TEST(Hyperbit, CorrelationCoefficients) {
  double c0 = 0;
  const RealMatrix c = correlation_coefficients(catalog("w_5").functional(), &c0);
  EXPECT_NEAR(c0, 0.0, 1e-12);
  EXPECT_TRUE(c.isApprox(catalog("w_5").coeffs));
  Functional f(1, 1, 2);
  f.at(0, 0, 0) = 3;
  f.at(0, 0, 1) = 1;
  const RealMatrix c1 = correlation_coefficients(f, &c0);
  EXPECT_DOUBLE_EQ(c1(0, 0), 1.0);
  EXPECT_DOUBLE_EQ(c0, 2.0);
  EXPECT_THROW(correlation_coefficients(Functional(1, 1, 3), &c0), std::invalid_argument);
}

TEST(Hyperbit, W5BoundIsNine) {
  const HyperbitResult r = hyperbit_upper_bound(catalog("w_5"));
  EXPECT_NEAR(r.report.value, 9.0, 1e-3);
  EXPECT_EQ(r.report.direction, BoundDirection::upper);
}

TEST(Hyperbit, RacBound) {
  EXPECT_NEAR(hyperbit_upper_bound(catalog("w_rac")).report.value, 4 * std::sqrt(2.0), 1e-4);
}

TEST(Hyperbit, GramMatrixIsValid) {
  const HyperbitResult r = hyperbit_upper_bound(catalog("w_5"));
  ASSERT_GT(r.gram.rows(), 0);
  Eigen::SelfAdjointEigenSolver<RealMatrix> es(r.gram);
  EXPECT_GT(es.eigenvalues().minCoeff(), -1e-6);
  for (int i = 0; i < r.gram.rows(); ++i) EXPECT_NEAR(r.gram(i, i), 1.0, 1e-6);
}

// Explicit unit vectors are feasible for the Gram problem, so their value
// never exceeds the bound.
TEST(Hyperbit, ExplicitVectorsBelowBound) {
  std::mt19937_64 rng(81);
  const RealMatrix c = catalog("w_5").coeffs;
  const double bound = hyperbit_upper_bound(catalog("w_5")).report.value;
  for (int t = 0; t < 200; ++t) {
    const int dim = 1 + t % 6;
    const RealMatrix a = random_unit_columns(dim, 5, rng), b = random_unit_columns(dim, 4, rng);
    double v = gram_objective(c, a, b);
    double direct = 0;
    for (int x = 0; x < 5; ++x)
      for (int y = 0; y < 4; ++y) direct += c(x, y) * a.col(x).dot(b.col(y));
    EXPECT_NEAR(v, direct, 1e-12);
    EXPECT_LE(v, bound + 1e-6);
  }
}

TEST(Hyperbit, DominatesQubitAndClassical) {
  for (const auto& name : {"w_rac", "w_5"}) {
    const Witness w = catalog(name);
    const double hb = hyperbit_upper_bound(w).report.value;
    EXPECT_GE(hb, classical_bound_bruteforce(w, 2) - 1e-6);
    SeesawConfig cfg;
    cfg.D = 1;
    cfg.restarts = 5;
    cfg.seed = 7;
    EXPECT_GE(hb, seesaw_quantum(w, 2, cfg).report.value - 1e-4);
  }
}

TEST(HyperbitSlow, EaBitSeparation) {
  const Separation s = ea_bit_exceeds_hyperbit_demo();
  EXPECT_NEAR(s.hyperbit_bound, 9.0, 1e-3);
  EXPECT_GE(s.ea_value, 9.024);
  EXPECT_TRUE(s.separated);
}

}  // namespace
}  // namespace eacomm
