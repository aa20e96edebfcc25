#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fogbench/domain.hpp"

namespace fogbench {

/// Raw timings of one benchmark execution, in seconds and bytes.
struct TimingBreakdown {
  double t1 = 0.0;  // asset to the destination node (plus inter-node forwards)
  double et = 0.0;  // sum of service execution times
  double t2 = 0.0;  // results to the result store
  double t3 = 0.0;  // results to the observer
  double t4 = 0.0;  // cloud-to-edge offload, 0 outside cloud-edge
  std::uint64_t bytes_up = 0;
  std::uint64_t bytes_down = 0;
  std::uint64_t bytes_down_cloud_edge = 0;
  std::optional<double> file_length;  // audio length, s

  bool operator==(const TimingBreakdown&) const = default;
};

struct AppMetrics {
  double rtt = 0.0;                             // t1 + et + t3
  double communication_latency = 0.0;           // t1 + t3
  double complete_computation_latency = 0.0;    // rtt + t4
  double complete_communication_latency = 0.0;  // t1 + t3 + t4
  double cost = 0.0;
  std::optional<double> rtf;                    // et / file_length
  double bytes_up_rate = 0.0;
  double bytes_down_rate = 0.0;
  double bytes_down_cloud_edge_rate = 0.0;

  bool operator==(const AppMetrics&) const = default;
};

AppMetrics compute_app_metrics(const TimingBreakdown& t, double cost_rate_per_hour);

/// et / 3600 * rate, rounded to 6 decimal places.
double estimate_cost(double et_seconds, double rate_per_hour);

/// bytes / seconds, 0 when seconds is 0.
double byte_rate(std::uint64_t bytes, double seconds);

/// Empty when every latency and rate identity holds exactly; otherwise one
/// message per broken identity.
std::vector<std::string> identity_violations(const TimingBreakdown& t, const AppMetrics& m);

// ---------------------------------------------------------------------------
// Keys and aggregation
// ---------------------------------------------------------------------------

/// Everything that identifies an experiment cell.
struct CellKey {
  std::string workload;
  DeploymentMode mode = DeploymentMode::CloudOnly;
  ServicePlacement placement;
  StressLevel stress = StressLevel::None;
  int users = 1;

  bool operator==(const CellKey&) const = default;
};

struct ExperimentKey {
  CellKey cell;
  std::string asset;
  int repetition = 0;

  bool operator==(const ExperimentKey&) const = default;
};

struct Stat {
  double mean = 0.0;
  double stddev = 0.0;  // sample (n - 1); 0 for a single value
  bool operator==(const Stat&) const = default;
};

/// Two-pass mean and sample standard deviation. Throws EmptyInput.
Stat mean_stddev(std::span<const double> values);

struct AggregateMetrics {
  Stat t1, et, t2, t3, t4;
  Stat rtt, communication_latency, complete_computation_latency, complete_communication_latency;
  Stat cost;
  std::optional<Stat> rtf;
  Stat bytes_up_rate, bytes_down_rate, bytes_down_cloud_edge_rate;
  std::size_t repetition_count = 0;
};

struct MetricSample {
  CellKey key;
  TimingBreakdown timing;
  AppMetrics metrics;
};

/// Throws EmptyInput on an empty list and HeterogeneousKey when samples come
/// from different cells.
AggregateMetrics aggregate(std::span<const MetricSample> samples);

/// Relative-tolerance check of the latency identities on aggregate means.
bool aggregate_identities_hold(const AggregateMetrics& a, double tolerance = 1e-9);

}  // namespace fogbench
