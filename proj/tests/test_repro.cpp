#include "eacomm/repro.hpp"

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include <set>

namespace eacomm {
namespace {

TEST(Repro, TargetsAreWellFormed) {
  std::set<std::string> ids;
  for (const auto& t : repro_targets()) {
    EXPECT_TRUE(ids.insert(t.id).second) << t.id;
    EXPECT_TRUE(static_cast<bool>(t.run)) << t.id;
    EXPECT_FALSE(t.method.empty()) << t.id;
    EXPECT_GE(t.tolerance, 0.0) << t.id;
    if (t.check == Check::within) EXPECT_TRUE(t.upper.has_value()) << t.id;
  }
  EXPECT_GT(ids.size(), 20u);
}

TEST(Repro, ReferenceOnlyNeverFails) {
  const auto out = reproduce("frac_ea_q2_info", {});
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].verdict, "reference_only");
  EXPECT_TRUE(passed(out[0]));
  ASSERT_TRUE(out[0].computed.has_value());
  EXPECT_NEAR(*out[0].computed, 38.8284, 1e-4);
}

TEST(Repro, SingleTargetPasses) {
  const auto out = reproduce("rac_dense_coding", {});
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].verdict, "pass");
  EXPECT_NEAR(*out[0].computed, 8.0, 1e-9);
}

TEST(Repro, UnknownFilterThrows) { EXPECT_THROW(reproduce("no_such_target", {}), std::invalid_argument); }

TEST(Repro, JsonFieldsAndTiming) {
  const auto out = reproduce("w5_c3_bruteforce", {});
  const nlohmann::json j = to_json(out[0], false);
  EXPECT_EQ(j["id"], "w5_c3_bruteforce");
  EXPECT_EQ(j["verdict"], "pass");
  EXPECT_EQ(j["provenance"], "paper_bound");
  EXPECT_EQ(j["tag"], "fast");
  EXPECT_DOUBLE_EQ(j["computed"].get<double>(), 10.0);
  EXPECT_FALSE(j.contains("wall_time"));
  EXPECT_TRUE(to_json(out[0], true).contains("wall_time"));
}

TEST(Repro, DeterministicJson) {
  ReproContext a;
  a.seed = 13;
  ReproContext b = a;
  b.threads = 2;
  const auto ra = reproduce("rac_q2_seesaw", a), rb = reproduce("rac_q2_seesaw", b);
  EXPECT_EQ(to_json(ra[0], false).dump(), to_json(rb[0], false).dump());
}

}  // namespace
}  // namespace eacomm
