#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "fogbench/metrics.hpp"

using namespace fogbench;

TEST(AppMetrics, IdentitiesExact) {
  TimingBreakdown t{.t1 = 0.125, .et = 2.5, .t2 = 0.3, .t3 = 0.0625, .t4 = 1.75,
                    .bytes_up = 1000, .bytes_down = 50, .bytes_down_cloud_edge = 7000};
  const auto m = compute_app_metrics(t, 0.0);
  EXPECT_EQ(m.rtt, t.t1 + t.et + t.t3);
  EXPECT_EQ(m.communication_latency, t.t1 + t.t3);
  EXPECT_EQ(m.complete_computation_latency, m.rtt + t.t4);
  EXPECT_EQ(m.complete_communication_latency, t.t1 + t.t3 + t.t4);
  EXPECT_EQ(m.bytes_up_rate, 1000 / 0.125);
  EXPECT_EQ(m.bytes_down_rate, 50 / 0.0625);
  EXPECT_EQ(m.bytes_down_cloud_edge_rate, 7000 / 1.75);
  EXPECT_FALSE(m.rtf);
  EXPECT_TRUE(identity_violations(t, m).empty());
}

TEST(AppMetrics, RtfOnlyWithFileLength) {
  TimingBreakdown t{.et = 4.0};
  t.file_length = 10.0;
  EXPECT_DOUBLE_EQ(*compute_app_metrics(t, 0).rtf, 0.4);
}

TEST(AppMetrics, BrokenIdentityDetected) {
  TimingBreakdown t{.t1 = 1, .et = 1, .t3 = 1};
  auto m = compute_app_metrics(t, 0);
  m.communication_latency += 1e-9;
  EXPECT_EQ(identity_violations(t, m).size(), 1u);
  m.rtt += 1e-9;  // breaks rtt and rtt + t4
  EXPECT_EQ(identity_violations(t, m).size(), 3u);
}

TEST(Cost, HandComputedOracle) {
  // 1234 s at 0.0944 per hour = 0.0323582...
  EXPECT_EQ(estimate_cost(1234, 0.0944), 0.032358);
  EXPECT_EQ(estimate_cost(3600, 1.0), 1.0);
  EXPECT_EQ(estimate_cost(0, 5.0), 0.0);
}

TEST(ByteRate, ZeroTime) {
  EXPECT_EQ(byte_rate(100, 0.0), 0.0);
  EXPECT_EQ(byte_rate(100, 4.0), 25.0);
}

TEST(Stats, MeanStddevOracle) {
  const double xs[] = {2, 4, 4, 4, 5, 5, 7, 9};
  const auto s = mean_stddev(xs);
  EXPECT_DOUBLE_EQ(s.mean, 5.0);
  EXPECT_DOUBLE_EQ(s.stddev, std::sqrt(32.0 / 7.0));
  const double one[] = {3.5};
  EXPECT_EQ(mean_stddev(one), (Stat{3.5, 0.0}));
  EXPECT_THROW(mean_stddev(std::span<const double>{}), EmptyInput);
}

TEST(Stats, LargeOffsetStaysAccurate) {
  std::vector<double> xs;
  for (int i = 0; i < 1000; ++i) xs.push_back(1e9 + (i % 2 ? 1.0 : -1.0));
  const auto s = mean_stddev(xs);
  EXPECT_DOUBLE_EQ(s.mean, 1e9);
  EXPECT_NEAR(s.stddev, std::sqrt(1000.0 / 999.0), 1e-9);
}

namespace {

MetricSample sample(double t1, double et, double t3, double t4) {
  MetricSample s;
  s.key.workload = "w";
  s.timing = TimingBreakdown{.t1 = t1, .et = et, .t3 = t3, .t4 = t4, .bytes_up = 100, .bytes_down = 10};
  s.metrics = compute_app_metrics(s.timing, 0.5);
  return s;
}

}  // namespace

TEST(Aggregate, MeansAndIdentities) {
  std::vector<MetricSample> xs = {sample(0.1, 1.0, 0.2, 0.5), sample(0.3, 3.0, 0.4, 0.5)};
  const auto a = aggregate(xs);
  EXPECT_EQ(a.repetition_count, 2u);
  EXPECT_DOUBLE_EQ(a.rtt.mean, (1.3 + 3.7) / 2);
  EXPECT_DOUBLE_EQ(a.t4.stddev, 0.0);
  EXPECT_FALSE(a.rtf);
  EXPECT_TRUE(aggregate_identities_hold(a));
}

TEST(Aggregate, Errors) {
  EXPECT_THROW(aggregate(std::span<const MetricSample>{}), EmptyInput);
  std::vector<MetricSample> xs = {sample(1, 1, 1, 0), sample(1, 1, 1, 0)};
  xs[1].key.users = 2;
  EXPECT_THROW(aggregate(xs), HeterogeneousKey);
}

TEST(Aggregate, RandomizedIdentityProperty) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> d(0.0, 10.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<MetricSample> xs;
    for (int i = 0; i < 5; ++i) xs.push_back(sample(d(rng), d(rng), d(rng), d(rng)));
    for (const auto& x : xs) EXPECT_TRUE(identity_violations(x.timing, x.metrics).empty());
    EXPECT_TRUE(aggregate_identities_hold(aggregate(xs)));
  }
}
