#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fogbench/pipeline.hpp"

namespace fogbench {

/// Closed-loop user population. Exactly one of requests_per_user and
/// duration_seconds is set.
struct LoadProfile {
  int user_count = 1;
  std::optional<int> requests_per_user = 10;
  std::optional<double> duration_seconds;  // users stop issuing after this much testbed time
  double think_time = 0.0;
};

/// What each request runs.
struct LoadTarget {
  const WorkloadSpec* workload = nullptr;
  const ServicePlacement* placement = nullptr;
  const AssetSpec* asset = nullptr;
  std::uint64_t seed = 0;  // per-request filter seeds derive from it
};

struct RequestRecord {
  int user_id = 0;
  int seq = 0;          // per-user request number, from 0
  double start = 0.0;   // issue time
  double latency = 0.0;
  bool success = true;
  std::string error;
  PipelineResult pipeline;  // empty when the request failed before completing

  bool operator==(const RequestRecord& o) const {
    return user_id == o.user_id && seq == o.seq && start == o.start && latency == o.latency &&
           success == o.success && error == o.error;
  }
};

struct LoadSummary {
  double concurrency = 0.0;  // sum of latencies / wall duration
  std::uint64_t throughput = 0;
  std::uint64_t success_count = 0;
  std::uint64_t fail_count = 0;
  double avg_response_time = 0.0;
  double stddev_response_time = 0.0;  // sample (n - 1)
  double avg_latency = 0.0;           // equal to avg_response_time

  bool operator==(const LoadSummary&) const = default;
};

/// Population counts at an instant; thinking + queued + in_service + finished
/// always equals the user count.
struct Occupancy {
  double time = 0.0;
  int thinking = 0;
  int queued = 0;
  int in_service = 0;
  int finished = 0;
};

struct LoadRun {
  std::vector<RequestRecord> records;  // completion order
  double started_at = 0.0;
  double wall_duration = 0.0;
};

/// Throws std::invalid_argument for a malformed profile or target.
///
/// All-virtual targets run as a discrete-event simulation on the testbed's
/// logical clock: each step reserves its node resource at its arrival time and
/// ties break by event order, so per-node service is FIFO and the run is
/// deterministic. Targets touching an external node run one thread per user
/// against the wall clock instead.
LoadRun run_load(const LoadProfile& profile, Testbed& testbed, const LoadTarget& target,
                 const std::function<void(const Occupancy&)>& trace = {});

/// Throws EmptyInput on an empty log.
LoadSummary summarize(std::span<const RequestRecord> records, double wall_duration);

}  // namespace fogbench
