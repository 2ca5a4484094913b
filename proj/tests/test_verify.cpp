#include <gtest/gtest.h>

#include "magflow/verify.hpp"

using namespace magflow;

TEST(Verify, CriteriaAreNumberedInOrder) {
  const auto& all = verify::criteria();
  ASSERT_EQ(all.size(), 13u);
  for (std::size_t i = 0; i < all.size(); ++i) EXPECT_EQ(all[i].id, static_cast<int>(i) + 1);
}

TEST(Verify, FlowOraclePassesWithStandardOrientation) {
  verify::Options opts;
  const auto results = verify::run_all(opts, {13});
  ASSERT_EQ(results.size(), 1u);
  EXPECT_TRUE(results[0].passed) << verify::summary_line(results[0]);
}

TEST(Verify, FlowOracleCatchesFlippedOrientation) {
  verify::Options opts;
  opts.orientation = Orientation::Flipped;
  const auto results = verify::run_all(opts, {13});
  ASSERT_EQ(results.size(), 1u);
  EXPECT_FALSE(results[0].passed);
  EXPECT_GT(results[0].measured["max_base_distance"].get<double>(), 1e-3);
}

TEST(Verify, JsonSummary) {
  verify::Options opts;
  const auto results = verify::run_all(opts, {1, 2});
  const nlohmann::json j = verify::to_json(results);
  EXPECT_EQ(j["criteria"].size(), 2u);
  EXPECT_TRUE(j["all_passed"].get<bool>());
  EXPECT_NE(verify::summary_line(results[0]).find("[PASS] 01 periodicity"), std::string::npos);
}
