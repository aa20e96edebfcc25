#include <gtest/gtest.h>

#include <algorithm>
#include <fstream>

#include "fogbench/domain.hpp"
#include "fogbench/workloads.hpp"
#include "test_support.hpp"

using namespace fogbench;

TEST(Taxonomy, NamesRoundTrip) {
  for (auto m : kAllModes) EXPECT_EQ(parse_mode(to_string(m)), m);
  for (auto s : kAllStressLevels) EXPECT_EQ(parse_stress_level(to_string(s)), s);
  for (auto p : kBuiltinProfiles) EXPECT_EQ(parse_profile(to_string(p)), p);
  for (auto t : {Tier::Cloud, Tier::Edge}) EXPECT_EQ(parse_tier(to_string(t)), t);
  for (auto t : {StressTarget::Edge, StressTarget::Cloud, StressTarget::All}) {
    EXPECT_EQ(parse_stress_target(to_string(t)), t);
  }
  EXPECT_FALSE(parse_mode("fog"));
  EXPECT_FALSE(parse_stress_level(""));
}

TEST(Placement, SingleTierModesPutEverythingOnOneNode) {
  const auto w = make_profile(Profile::RealfdLike);
  auto cloud = placements_for_mode(w, DeploymentMode::CloudOnly, "c", "e");
  ASSERT_EQ(cloud.size(), 1u);
  for (const auto& a : cloud[0].assignments) EXPECT_EQ(a.node, "c");
  auto edge = placements_for_mode(w, DeploymentMode::EdgeOnly, "c", "e");
  ASSERT_EQ(edge.size(), 1u);
  for (const auto& a : edge[0].assignments) EXPECT_EQ(a.node, "e");
}

TEST(Placement, CloudEdgePrefixSplits) {
  const auto w = make_profile(Profile::RealfdLike);
  auto ps = placements_for_mode(w, DeploymentMode::CloudEdge, "c", "e");
  ASSERT_EQ(ps.size(), 2u);
  EXPECT_EQ(ps[0].label(), "GSC@e+MD@c+FD@c|offload@c");
  EXPECT_EQ(ps[1].label(), "GSC@e+MD@e+FD@c|offload@c");
  EXPECT_EQ(ps[0].node_for("MD"), "c");
}

TEST(Placement, SingleServiceHasNoProperSplit) {
  const auto w = make_profile(Profile::SphinxLike);
  EXPECT_TRUE(placements_for_mode(w, DeploymentMode::CloudEdge, "c", "e").empty());
  auto full = full_offload_placement(w, "c", "e");
  EXPECT_EQ(full.label(), "recognize@e|offload@c");
}

TEST(Validation, DefaultConfigIsValid) {
  EXPECT_TRUE(collect_violations(default_run_config()).empty());
  EXPECT_NO_THROW(validate_run_config(default_run_config()));
}

TEST(Validation, FoglampRejectedFromCloudEdge) {
  auto cfg = test::single_cell_config(make_profile(Profile::FoglampLike), DeploymentMode::CloudEdge, 1);
  try {
    validate_run_config(cfg);
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    ASSERT_EQ(e.violations().size(), 1u);
    EXPECT_EQ(e.violations()[0].field, "modes");
    EXPECT_EQ(e.violations()[0].entity, "foglamp-like");
  }
}

TEST(Validation, ReportsEveryViolation) {
  RunConfig cfg;
  cfg.repetitions = 0;
  cfg.user_counts.clear();
  const auto v = collect_violations(cfg);
  auto has = [&](const std::string& field) {
    return std::any_of(v.begin(), v.end(), [&](const Violation& x) { return x.field == field; });
  };
  EXPECT_TRUE(has("workloads"));
  EXPECT_TRUE(has("modes"));
  EXPECT_TRUE(has("repetitions"));
  EXPECT_TRUE(has("user_counts"));
}

TEST(Validation, ModeNeedsMatchingTier) {
  auto cfg = test::single_cell_config(make_profile(Profile::YoloLike), DeploymentMode::EdgeOnly, 1);
  cfg.nodes.pop_back();  // drop edge-1
  const auto v = collect_violations(cfg);
  ASSERT_FALSE(v.empty());
  EXPECT_EQ(v[0].entity, "edge-only");
}

TEST(Validation, ExplicitPlacementMustBeEdgePrefix) {
  auto cfg = test::single_cell_config(make_profile(Profile::RealfdLike), DeploymentMode::CloudEdge, 1);
  ServicePlacement p;
  p.assignments = {{"GSC", "cloud-1"}, {"MD", "edge-1"}, {"FD", "cloud-1"}};
  cfg.placements = {{"realfd-like", p}};
  EXPECT_FALSE(collect_violations(cfg).empty());

  p.assignments = {{"GSC", "edge-1"}, {"MD", "edge-1"}, {"FD", "edge-1"}};
  cfg.placements = {{"realfd-like", p}};
  EXPECT_FALSE(collect_violations(cfg).empty()) << "full edge placement needs an offload source";
  cfg.placements[0].placement.offload_source = "cloud-1";
  EXPECT_TRUE(collect_violations(cfg).empty());
}

TEST(Validation, DuplicateIds) {
  auto cfg = default_run_config();
  cfg.nodes.push_back(cfg.nodes[0]);
  cfg.workloads.push_back(cfg.workloads[0]);
  const auto v = collect_violations(cfg);
  EXPECT_GE(v.size(), 2u);
}

TEST(Assets, GeneratedContentIsDeterministic) {
  AssetSpec a{"a", 1000, GeneratedContent{42}};
  const auto x = materialize(a);
  EXPECT_EQ(x.size(), 1000u);
  EXPECT_EQ(x, materialize(a));
  a.content_source = GeneratedContent{43};
  EXPECT_NE(x, materialize(a));
}

TEST(Assets, FileSizeMismatchRaises) {
  auto dir = test::scratch_dir("assets");
  auto path = dir / "blob";
  { std::ofstream(path) << "12345"; }
  EXPECT_EQ(materialize(AssetSpec{"f", 5, FileContent{path}}).size(), 5u);
  EXPECT_THROW(materialize(AssetSpec{"f", 6, FileContent{path}}), IoError);
}
