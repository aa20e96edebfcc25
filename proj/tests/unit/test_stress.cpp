#include <gtest/gtest.h>

#include "fogbench/node_runtime.hpp"
#include "fogbench/stress.hpp"
#include "test_support.hpp"

using namespace fogbench;

TEST(StressProfile, LevelTable) {
  EXPECT_TRUE(stress_profile(StressLevel::None, 4).empty());
  const auto minimal = stress_profile(StressLevel::Minimal, 4);
  EXPECT_EQ(minimal.cpu_cores_stressed, 1);
  ASSERT_TRUE(minimal.network_throttle);
  EXPECT_EQ(minimal.network_throttle->file_bytes, 256'000'000u);
  EXPECT_EQ(minimal.network_throttle->rate, 21740.0);
  EXPECT_EQ(stress_profile(StressLevel::Low, 4).cpu_cores_stressed, 2);
  EXPECT_EQ(stress_profile(StressLevel::Medium, 4).cpu_cores_stressed, 3);
  EXPECT_EQ(stress_profile(StressLevel::High, 4).cpu_cores_stressed, 4);
  const auto very = stress_profile(StressLevel::VeryHigh, 8);
  EXPECT_EQ(very.cpu_cores_stressed, 8);
  EXPECT_EQ(very.ram_stressor_count, 2);
  EXPECT_FALSE(very.network_throttle);
}

TEST(StressProfile, CappedAtCoreCount) {
  EXPECT_EQ(stress_profile(StressLevel::High, 2).cpu_cores_stressed, 2);
  EXPECT_EQ(stress_profile(StressLevel::Medium, 1).cpu_cores_stressed, 1);
}

TEST(StressState, CoreFractionWithFloor) {
  EXPECT_EQ(available_core_fraction(4, 0), 1.0);
  EXPECT_EQ(available_core_fraction(4, 2), 0.5);
  EXPECT_EQ(available_core_fraction(4, 3), 0.25);
  EXPECT_EQ(available_core_fraction(4, 4), 0.0625);  // 0.25 core of 4
  EXPECT_EQ(available_core_fraction(1, 1), 0.25);
}

TEST(StressState, BandwidthFraction) {
  const auto s = derive_stress_state(stress_profile(StressLevel::Minimal, 4), 4, 5e6);
  EXPECT_DOUBLE_EQ(s.bandwidth_fraction, 21740.0 / 5e6);
  EXPECT_EQ(s.available_core_fraction, 0.75);
  EXPECT_EQ(derive_stress_state(stress_profile(StressLevel::High, 4), 4, 5e6).bandwidth_fraction, 1.0);
}

TEST(StressState, HandEvaluatedEtOracle) {
  // 2e8 work on a 2e8 wu/s, 4-core node with 0.1 penalty per RAM stressor.
  VirtualParams p;
  p.compute_speed = 2e8;
  const double expected[] = {1.0, 4.0 / 3.0, 2.0, 4.0, 16.0, 16.0 * 1.2};
  int i = 0;
  for (auto level : kAllStressLevels) {
    const auto s = derive_stress_state(stress_profile(level, 4), 4, 5e6);
    EXPECT_DOUBLE_EQ(virtual_exec_time(p, 2e8, s, 0.0), expected[i++]) << to_string(level);
  }
}

TEST(StressHandle, VirtualApplyAndRelease) {
  Testbed tb(test::quiet_testbed(), test::no_store());
  {
    auto h = apply_stress(tb, "edge-1", stress_profile(StressLevel::Low, 4));
    EXPECT_TRUE(h.active());
    EXPECT_EQ(tb.stress_state("edge-1").available_core_fraction, 0.5);
    EXPECT_EQ(tb.active_stress_count(), 1u);
    EXPECT_THROW(apply_stress(tb, "edge-1", stress_profile(StressLevel::High, 4)), StressAlreadyActive);
    release_stress(h);
    EXPECT_FALSE(h.active());
    EXPECT_THROW(release_stress(h), AlreadyReleased);
    EXPECT_EQ(tb.stress_state("edge-1").available_core_fraction, 1.0);
  }
  {
    auto h = apply_stress(tb, "edge-1", stress_profile(StressLevel::VeryHigh, 4));
    auto moved = std::move(h);
    EXPECT_FALSE(h.active());
    EXPECT_TRUE(moved.active());
  }
  EXPECT_EQ(tb.active_stress_count(), 0u) << "destructor releases";
  StressHandle empty;
  EXPECT_THROW(release_stress(empty), AlreadyReleased);
}

TEST(StressHandle, ExternalSpawnsAndTerminates) {
  auto stub = std::make_shared<StubTransport>();
  TransportRegistry reg;
  reg.add("stub", std::static_pointer_cast<RemoteTransport>(stub));
  TransportParams p;
  p.adapter = "stub";
  p.core_count = 4;
  Testbed tb({NodeSpec{"ext", Tier::Edge, p, {}}}, test::no_store(), reg);
  {
    auto h = apply_stress(tb, "ext", stress_profile(StressLevel::VeryHigh, 4));
    EXPECT_EQ(h.spawned().size(), 2u);
    EXPECT_EQ(stub->live_processes().size(), 2u);
    const auto spawns = stub->calls("spawn");
    ASSERT_EQ(spawns.size(), 2u);
    EXPECT_EQ(spawns[0].args, (std::vector<std::string>{"stress", "--cpu", "4"}));
    EXPECT_EQ(spawns[1].args, (std::vector<std::string>{"stress", "--vm", "2"}));
  }
  EXPECT_TRUE(stub->live_processes().empty());
  EXPECT_EQ(stub->calls("terminate").size(), 2u);
}
