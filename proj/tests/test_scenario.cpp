#include "eacomm/scenario.hpp"

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include <cmath>

namespace eacomm {
namespace {

// Enumerates encodings x -> m and decoders (y, m) -> b independently.
double naive_classical_max(const Functional& f, int d) {
  long long enc = 1, dec = 1;
  for (int i = 0; i < f.n_x; ++i) enc *= d;
  for (int i = 0; i < f.n_y * d; ++i) dec *= f.n_b;
  double best = -1e300;
  for (long long e = 0; e < enc; ++e)
    for (long long g = 0; g < dec; ++g) {
      double v = f.constant;
      for (int x = 0; x < f.n_x; ++x) {
        long long t = e;
        for (int i = 0; i < x; ++i) t /= d;
        const int m = static_cast<int>(t % d);
        for (int y = 0; y < f.n_y; ++y) {
          long long u = g;
          for (int i = 0; i < y * d + m; ++i) u /= f.n_b;
          v += f.at(x, y, static_cast<int>(u % f.n_b));
        }
      }
      best = std::max(best, v);
    }
  return best;
}

Behavior deterministic(const Scenario& s, const std::vector<int>& b_of_xy) {
  std::vector<double> t(static_cast<size_t>(s.table_size()), 0.0);
  for (int x = 0; x < s.n_x; ++x)
    for (int y = 0; y < s.n_y; ++y) t[static_cast<size_t>(s.index(x, y, b_of_xy[static_cast<size_t>(x * s.n_y + y)]))] = 1;
  return Behavior(s, t);
}

TEST(Behavior, RejectsBadTables) {
  Scenario s{2, 2, 2, 2};
  std::vector<double> t(8, 0.5);
  EXPECT_NO_THROW(Behavior(s, t));
  t[0] = 0.7;
  EXPECT_THROW(Behavior(s, t), std::invalid_argument);
  t[0] = -0.1;
  t[1] = 1.1;
  EXPECT_THROW(Behavior(s, t), std::invalid_argument);
  EXPECT_THROW(Behavior(s, std::vector<double>(7, 0.5)), std::invalid_argument);
}

TEST(Behavior, Correlator) {
  Scenario s{1, 1, 2, 2};
  Behavior b(s, {0.75, 0.25});
  EXPECT_DOUBLE_EQ(b.correlator(0, 0), 0.5);
}

TEST(Witness, RacOnDeterministicBehaviors) {
  const Witness w = catalog("w_rac");
  // b = x_y for every x, y gives the algebraic maximum 8.
  std::vector<int> bits;
  for (int x = 0; x < 4; ++x) {
    bits.push_back(x >> 1);
    bits.push_back(x & 1);
  }
  EXPECT_DOUBLE_EQ(evaluate_witness(w, deterministic(w.scenario, bits)), 8.0);
  EXPECT_DOUBLE_EQ(w.functional().algebraic_max(), 8.0);
  EXPECT_DOUBLE_EQ(evaluate_witness(w, Behavior::uniform(w.scenario)), 0.0);
}

TEST(Witness, FunctionalMatchesCorrelationForm) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0, 1);
  for (const auto& name : {"w_rac", "w_frac", "w_5"}) {
    const Witness w = catalog(name);
    const Functional f = w.functional();
    for (int t = 0; t < 20; ++t) {
      std::vector<double> tab;
      for (int i = 0; i < w.scenario.n_x * w.scenario.n_y; ++i) {
        const double p = u(rng);
        tab.push_back(p);
        tab.push_back(1 - p);
      }
      Behavior beh(w.scenario, tab);
      double direct = 0;
      for (int x = 0; x < w.scenario.n_x; ++x)
        for (int y = 0; y < w.scenario.n_y; ++y) direct += w.coeffs(x, y) * beh.correlator(x, y);
      EXPECT_NEAR(f.evaluate(beh), direct, 1e-12);
      EXPECT_NEAR(evaluate_witness(w, beh), direct, 1e-12);
    }
  }
}

TEST(Witness, CatalogShapes) {
  EXPECT_EQ(catalog("w_5").scenario.n_x, 5);
  EXPECT_EQ(catalog("w_5").scenario.n_y, 4);
  EXPECT_EQ(catalog("w_frac").scenario.n_x, 5);
  EXPECT_EQ(catalog("w_frac").scenario.n_y, 3);
  EXPECT_EQ(catalog("rac_9_3").scenario.n_x, 9);
  EXPECT_EQ(catalog("rac_9_3").scenario.n_b, 3);
  EXPECT_EQ(catalog("w_rac_flagged").constraints.size(), 5u);
  EXPECT_THROW(catalog("nope"), std::invalid_argument);
  for (const auto& n : catalog_names()) EXPECT_NO_THROW(catalog(n));
}

TEST(Witness, FlagConstraints) {
  const Witness w = catalog("w_rac_flagged");
  std::vector<double> t;
  for (int x = 0; x < 5; ++x)
    for (int y = 0; y < 3; ++y) {
      const double e = y == 2 ? (x < 4 ? 1.0 : -1.0) : 0.0;
      t.push_back((1 + e) / 2);
      t.push_back((1 - e) / 2);
    }
  Behavior ok(w.scenario, t);
  EXPECT_TRUE(check_constraints(w, ok));
  t[2 * (0 * 3 + 2)] = 0.5;
  t[2 * (0 * 3 + 2) + 1] = 0.5;
  EXPECT_FALSE(check_constraints(w, Behavior(w.scenario, t)));
}

TEST(Bruteforce, RacChain) {
  const Witness w = catalog("w_rac");
  EXPECT_DOUBLE_EQ(classical_bound_bruteforce(w, 2), 4.0);
  EXPECT_DOUBLE_EQ(classical_bound_bruteforce(w, 3), 6.0);
  EXPECT_DOUBLE_EQ(classical_bound_bruteforce(w, 4), 8.0);
}

TEST(Bruteforce, W5Chain) {
  const Witness w = catalog("w_5");
  EXPECT_DOUBLE_EQ(classical_bound_bruteforce(w, 2), 8.0);
  EXPECT_DOUBLE_EQ(classical_bound_bruteforce(w, 3), 10.0);
  EXPECT_DOUBLE_EQ(classical_bound_bruteforce(w, 4), 12.0);
  EXPECT_DOUBLE_EQ(classical_bound_bruteforce(w, 5), 14.0);
}

TEST(Bruteforce, AgreesWithNaiveEnumeration) {
  EXPECT_DOUBLE_EQ(classical_bound_bruteforce(catalog("w_rac").functional(), 2),
                   naive_classical_max(catalog("w_rac").functional(), 2));
  EXPECT_DOUBLE_EQ(classical_bound_bruteforce(catalog("w_rac").functional(), 3),
                   naive_classical_max(catalog("w_rac").functional(), 3));
  std::mt19937_64 rng(4);
  std::normal_distribution<double> n;
  for (int t = 0; t < 10; ++t) {
    Functional f(3, 2, 3);
    for (auto& c : f.coeffs) c = n(rng);
    f.constant = n(rng);
    EXPECT_NEAR(classical_bound_bruteforce(f, 2), naive_classical_max(f, 2), 1e-12);
  }
}

TEST(Bruteforce, RejectsHugeSearch) {
  Functional f(40, 1, 2);
  EXPECT_THROW(classical_bound_bruteforce(f, 3, 1000), std::length_error);
}

TEST(Json, RoundTrips) {
  for (const auto& n : catalog_names()) {
    const Witness w = catalog(n);
    const Witness r = witness_from_json(to_json(w));
    EXPECT_EQ(r.name, w.name);
    EXPECT_EQ(r.functional().coeffs, w.functional().coeffs);
    EXPECT_EQ(r.constraints.size(), w.constraints.size());
  }
  Scenario s{2, 3, 2, 4, MessageKind::classical, Assistance::entanglement};
  const Scenario s2 = scenario_from_json(to_json(s));
  EXPECT_EQ(s2.n_y, 3);
  EXPECT_EQ(s2.d, 4);
  EXPECT_EQ(s2.message, MessageKind::classical);
  Behavior b = Behavior::uniform(s);
  EXPECT_EQ(behavior_from_json(to_json(b)).table(), b.table());
}

TEST(Json, ReportTimingOptional) {
  BoundReport r;
  r.value = 1.5;
  r.method = "x";
  r.wall_time = 2.0;
  EXPECT_TRUE(to_json(r, true).contains("wall_time"));
  EXPECT_FALSE(to_json(r, false).contains("wall_time"));
}

}  // namespace
}  // namespace eacomm
