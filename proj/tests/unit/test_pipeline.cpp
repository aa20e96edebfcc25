#include <gtest/gtest.h>

#include "fogbench/pipeline.hpp"
#include "fogbench/workloads.hpp"
#include "test_support.hpp"

using namespace fogbench;

namespace {

struct Rig {
  Testbed tb{test::quiet_testbed(), ResultStoreSpec{}};
  WorkloadSpec w = make_profile(Profile::RealfdLike);

  void provision(const ServicePlacement& p) {
    for (const auto& a : p.assignments) tb.provision_environment(a.node, w);
  }
};

/// First seed whose MD filter draw passes (or drops, when `pass` is false).
std::uint64_t seed_where_md(bool pass) {
  for (std::uint64_t s = 1;; ++s) {
    CounterRng r(s);
    if ((r.uniform() < 0.6) == pass) return s;
  }
}

}  // namespace

TEST(Pipeline, RealfdEdgeOnlyTrace) {
  Rig rig;
  const auto p = placements_for_mode(rig.w, DeploymentMode::EdgeOnly, "cloud-1", "edge-1")[0];
  rig.provision(p);
  const auto r = run_pipeline(rig.tb, rig.w, p, rig.w.assets[0], seed_where_md(true));
  EXPECT_FALSE(r.dropped);
  EXPECT_EQ(r.output_bytes, (std::vector<std::uint64_t>{600'000, 600'000, 600}));
  EXPECT_EQ(r.final_output_bytes, 600u);

  const auto& t = r.timing;
  EXPECT_DOUBLE_EQ(t.t1, 0.01 + 900'000 / 5e6);
  EXPECT_DOUBLE_EQ(t.et, (5 * 900'000 + 10 * 600'000 + 500 * 600'000) / 2e8);
  EXPECT_NEAR(t.t3, 0.01 + 600 / 5e6, 1e-15);
  EXPECT_DOUBLE_EQ(t.t2, 0.01 + 0.02 + 600 / 5e6);
  EXPECT_EQ(t.t4, 0.0);
  EXPECT_EQ(t.bytes_up, 900'000u);
  EXPECT_EQ(t.bytes_down, 600u);
  EXPECT_EQ(r.forward_time, 0.0);
  EXPECT_DOUBLE_EQ(r.completed_at - r.issued_at, t.t1 + t.et + t.t3);
  EXPECT_DOUBLE_EQ(rig.tb.now(), r.completed_at);
}

TEST(Pipeline, ForwardFoldsIntoT1) {
  Rig rig;
  const auto p = placements_for_mode(rig.w, DeploymentMode::CloudEdge, "cloud-1", "edge-1")[0];  // GSC on edge
  rig.provision(p);
  const auto r = run_pipeline(rig.tb, rig.w, p, rig.w.assets[0], seed_where_md(true));
  const double forward = 0.1 + 0.01 + 600'000 / 5e6;
  EXPECT_DOUBLE_EQ(r.forward_time, forward);
  EXPECT_DOUBLE_EQ(r.timing.t1, 0.01 + 900'000 / 5e6 + forward);
  EXPECT_EQ(r.timing.bytes_up, 1'500'000u);
  EXPECT_DOUBLE_EQ(r.timing.et, 4.5e6 / 2e8 + 6e6 / 1e9 + 3e8 / 1e9);
  EXPECT_DOUBLE_EQ(r.timing.t3, 0.1 + 600 / 20e6);
  EXPECT_EQ(r.execs[2].node_id, "cloud-1");
}

TEST(Pipeline, FilterDropReturnsNothing) {
  Rig rig;
  const auto p = placements_for_mode(rig.w, DeploymentMode::EdgeOnly, "cloud-1", "edge-1")[0];
  rig.provision(p);
  const auto r = run_pipeline(rig.tb, rig.w, p, rig.w.assets[0], seed_where_md(false));
  EXPECT_TRUE(r.dropped);
  EXPECT_EQ(r.execs.size(), 2u);
  EXPECT_EQ(r.timing.bytes_down, 0u);
  EXPECT_NEAR(r.timing.t3, 0.01, 1e-15);
}

TEST(Pipeline, FilterPassRateNearProbability) {
  Rig rig;
  const auto p = placements_for_mode(rig.w, DeploymentMode::EdgeOnly, "cloud-1", "edge-1")[0];
  rig.provision(p);
  int passed = 0;
  for (std::uint64_t s = 0; s < 2000; ++s) passed += !run_pipeline(rig.tb, rig.w, p, rig.w.assets[0], s).dropped;
  EXPECT_NEAR(passed / 2000.0, 0.6, 0.04);
}

TEST(Pipeline, StepwiseMatchesWholeRun) {
  Rig a, b;
  const auto p = placements_for_mode(a.w, DeploymentMode::CloudEdge, "cloud-1", "edge-1")[1];
  a.provision(p);
  b.provision(p);
  const auto seed = seed_where_md(true);
  const auto whole = run_pipeline(a.tb, a.w, p, a.w.assets[0], seed);

  PipelineExecution ex(b.tb, b.w, p, b.w.assets[0], seed);
  std::vector<StepKind> kinds;
  double t = 0.0;
  while (!ex.done()) {
    kinds.push_back(ex.next_step());
    t = ex.step(t).finish;
  }
  EXPECT_EQ(ex.result().timing, whole.timing);
  EXPECT_EQ(kinds.front(), StepKind::Deliver);
  EXPECT_EQ(kinds.back(), StepKind::Return);
  EXPECT_NE(std::find(kinds.begin(), kinds.end(), StepKind::Forward), kinds.end());
}

TEST(Pipeline, MissingEnvironmentNamesService) {
  Rig rig;
  const auto p = placements_for_mode(rig.w, DeploymentMode::EdgeOnly, "cloud-1", "edge-1")[0];
  try {
    run_pipeline(rig.tb, rig.w, p, rig.w.assets[0], 1);
    FAIL();
  } catch (const ExecFailure& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("realfd-like"), std::string::npos);
    EXPECT_NE(msg.find("GSC"), std::string::npos);
  }
}

TEST(Pipeline, RtfFromAudioLength) {
  Testbed tb(test::quiet_testbed(), test::no_store());
  const auto w = make_profile(Profile::SphinxLike);
  const auto p = placements_for_mode(w, DeploymentMode::CloudOnly, "cloud-1", "edge-1")[0];
  tb.provision_environment("cloud-1", w);
  const auto r = run_pipeline(tb, w, p, w.assets[0], 1);
  const auto m = compute_app_metrics(r.timing, 0);
  ASSERT_TRUE(m.rtf);
  EXPECT_DOUBLE_EQ(*m.rtf, r.timing.et / *w.audio_length_seconds);
}
