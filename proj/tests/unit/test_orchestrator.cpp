#include <gtest/gtest.h>

#include <map>

#include "fogbench/orchestrator.hpp"
#include "fogbench/workloads.hpp"
#include "test_support.hpp"

using namespace fogbench;

namespace {

ProfileOverrides assets(int n) {
  ProfileOverrides o;
  o.asset_count = n;
  return o;
}

RunOptions quiet_options() {
  RunOptions o;
  o.probe_platforms = false;
  return o;
}

}  // namespace

TEST(Cells, EnumerationOrderAndCount) {
  auto c = default_run_config();
  c.stress_levels = {StressLevel::None, StressLevel::Low};
  c.user_counts = {1, 2};
  const auto cells = enumerate_cells(c);
  EXPECT_EQ(cells.size(), 6u * 2 * 2 * 2);
  EXPECT_EQ(cells[0].key.workload, "yolo-like");
  EXPECT_EQ(cells[0].key.mode, DeploymentMode::CloudOnly);
  EXPECT_EQ(cells[1].key.users, 2);
  EXPECT_EQ(cells[2].key.stress, StressLevel::Low);
  EXPECT_EQ(cells[4].key.mode, DeploymentMode::EdgeOnly);
}

TEST(Cells, CloudEdgePlacements) {
  auto c = test::single_cell_config(make_profile(Profile::RealfdLike), DeploymentMode::CloudEdge, 1);
  auto cells = enumerate_cells(c);
  ASSERT_EQ(cells.size(), 3u);
  EXPECT_EQ(cells[0].key.placement.label(), "GSC@edge-1+MD@edge-1+FD@edge-1|offload@cloud-1");

  ServicePlacement p;
  p.assignments = {{"GSC", "edge-1"}, {"MD", "cloud-1"}, {"FD", "cloud-1"}};
  c.placements = {{"realfd-like", p}};
  cells = enumerate_cells(c);
  ASSERT_EQ(cells.size(), 1u);
  EXPECT_EQ(cells[0].key.placement, p);
}

TEST(Offload, SumsEdgeServicePayloads) {
  Testbed tb(test::quiet_testbed(), test::no_store());
  const auto w = make_profile(Profile::RealfdLike);
  const auto full = full_offload_placement(w, "cloud-1", "edge-1");
  const auto r = offload_assets(tb, w, full);
  EXPECT_EQ(r.bytes, 16'000u + 32'000u + 930'000u);
  EXPECT_DOUBLE_EQ(r.t4, 0.11 + 978'000 / 5e6);
  const auto cloud = placements_for_mode(w, DeploymentMode::CloudOnly, "cloud-1", "edge-1")[0];
  EXPECT_EQ(offload_assets(tb, w, cloud).bytes, 0u);
}

TEST(Run, CardinalityAndIdentities) {
  auto cfg = test::single_cell_config(make_profile(Profile::AeneasLike, assets(3)), DeploymentMode::EdgeOnly, 4);
  const auto rs = run_benchmark(validate_run_config(cfg), quiet_options());
  ASSERT_EQ(rs.records.size(), 12u);
  EXPECT_EQ(rs.failure_count(), 0u);
  EXPECT_EQ(rs.records[0].key.asset, "audio-1");
  EXPECT_EQ(rs.records[3].key.repetition, 2);
  for (const auto& r : rs.records) {
    EXPECT_TRUE(identity_violations(r.timing, r.metrics).empty());
    EXPECT_EQ(r.timing.t4, 0.0);
  }
}

TEST(Run, CloudEdgeCarriesT4) {
  auto cfg = test::single_cell_config(make_profile(Profile::PokemonLike), DeploymentMode::CloudEdge, 3);
  const auto rs = run_benchmark(validate_run_config(cfg), quiet_options());
  ASSERT_EQ(rs.records.size(), 3u);
  for (const auto& r : rs.records) {
    EXPECT_GT(r.timing.t4, 0.0);
    EXPECT_EQ(r.timing.bytes_down_cloud_edge, 512'000u);
    EXPECT_EQ(r.metrics.complete_computation_latency, r.metrics.rtt + r.timing.t4);
  }
}

TEST(Run, SeedDeterminism) {
  auto cfg = default_run_config();
  cfg.repetitions = 3;
  cfg.seed = 7;
  auto timings = [](const RunConfig& c) {
    std::vector<TimingBreakdown> t;
    for (const auto& r : run_benchmark(validate_run_config(c)).records) t.push_back(r.timing);
    return t;
  };
  const auto a = timings(cfg);
  EXPECT_EQ(a, timings(cfg));
  cfg.seed = 8;
  EXPECT_NE(a, timings(cfg));
}

TEST(Run, PlatformProbedForUsedNodesOnly) {
  auto cfg = test::single_cell_config(make_profile(Profile::PokemonLike), DeploymentMode::EdgeOnly, 1);
  const auto rs = run_benchmark(validate_run_config(cfg));
  ASSERT_EQ(rs.platform.size(), 1u);
  EXPECT_EQ(rs.platform.begin()->first, "edge-1");
}

TEST(Run, UnreachableNodeBecomesFailedRecords) {
  auto stub = std::make_shared<StubTransport>();
  stub->refuse_connections(true);
  TransportRegistry reg;
  reg.add("stub", std::static_pointer_cast<RemoteTransport>(stub));

  auto cfg = test::single_cell_config(make_profile(Profile::PokemonLike, assets(2)), DeploymentMode::EdgeOnly, 2);
  TransportParams t;
  t.adapter = "stub";
  t.core_count = 4;
  cfg.nodes.push_back(NodeSpec{"pi", Tier::Edge, t, {}});

  RunOptions o;
  o.registry = &reg;
  const auto rs = run_benchmark(validate_run_config(cfg), o);
  ASSERT_EQ(rs.records.size(), 8u);
  EXPECT_EQ(rs.failure_count(), 4u);
  for (const auto& r : rs.records) {
    const bool on_pi = r.key.cell.placement.assignments[0].node == "pi";
    EXPECT_EQ(r.success, !on_pi);
    if (on_pi) EXPECT_NE(r.error.find("pi"), std::string::npos);
  }
  EXPECT_FALSE(rs.platform.at("pi").missing.empty());
}

TEST(Run, StressAppliedPerCellAndReleased) {
  auto cfg = test::single_cell_config(make_profile(Profile::YoloLike), DeploymentMode::EdgeOnly, 3);
  cfg.stress_levels = {StressLevel::None, StressLevel::Medium, StressLevel::VeryHigh};
  Testbed* tb = nullptr;
  std::vector<std::size_t> active_after;
  RunOptions o = quiet_options();
  o.on_testbed = [&](Testbed& t) { tb = &t; };
  o.on_cell = [&](const CellSummary&) { active_after.push_back(tb->active_stress_count()); };
  const auto rs = run_benchmark(validate_run_config(cfg), o);
  EXPECT_EQ(active_after, (std::vector<std::size_t>{0, 0, 0}));

  std::map<StressLevel, double> et;
  for (const auto& r : rs.records) et[r.key.cell.stress] += r.timing.et;
  EXPECT_LT(et[StressLevel::None], et[StressLevel::Medium]);
  EXPECT_LT(et[StressLevel::Medium], et[StressLevel::VeryHigh]);
}

TEST(Run, StressTargetCloudLeavesEdgeAlone) {
  auto cfg = test::single_cell_config(make_profile(Profile::PokemonLike), DeploymentMode::EdgeOnly, 2);
  cfg.stress_levels = {StressLevel::None, StressLevel::High};
  cfg.stress_target = StressTarget::Cloud;
  const auto rs = run_benchmark(validate_run_config(cfg), quiet_options());
  // Unstressed edge cost is 0.1 s within 5% jitter.
  for (const auto& r : rs.records) EXPECT_LT(r.timing.et, 2e7 / 2e8 * 1.06);
}

TEST(Run, ConcurrentUsersAttachLoadSummary) {
  auto cfg = test::single_cell_config(make_profile(Profile::PokemonLike), DeploymentMode::EdgeOnly, 2);
  cfg.user_counts = {1, 5};
  cfg.load.requests_per_user = 3;
  const auto rs = run_benchmark(validate_run_config(cfg), quiet_options());
  ASSERT_EQ(rs.records.size(), 4u);
  EXPECT_FALSE(rs.records[0].load);
  ASSERT_TRUE(rs.records[2].load);
  EXPECT_EQ(rs.records[2].load->throughput, 15u);
  EXPECT_GT(rs.records[2].metrics.rtt, rs.records[0].metrics.rtt);
  EXPECT_TRUE(identity_violations(rs.records[2].timing, rs.records[2].metrics).empty());
}
