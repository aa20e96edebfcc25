#pragma once

#include <cstdint>
#include <vector>

#include "fogbench/domain.hpp"
#include "fogbench/metrics.hpp"
#include "fogbench/node_runtime.hpp"
#include "fogbench/rng.hpp"

namespace fogbench {

struct PipelineResult {
  std::vector<ExecResult> execs;            // pipeline order, executed services only
  std::vector<std::uint64_t> output_bytes;  // per executed service
  std::uint64_t final_output_bytes = 0;
  bool dropped = false;
  /// t1 (asset delivery plus inter-node forwards), et, t2, t3 and byte counts.
  /// Each interval includes time spent queued at the node. t4 stays 0.
  TimingBreakdown timing;
  double forward_time = 0.0;                // part of t1 spent crossing between nodes
  double issued_at = 0.0;
  double completed_at = 0.0;                // end of the return transfer
};

enum class StepKind { Deliver, Execute, Forward, Return, Done };

/// One request through a workload's service pipeline, advanced one step at a
/// time so that a scheduler can interleave many of them on the logical clock.
///
/// Steps: Deliver (observer -> first node), Execute per service, Forward when
/// consecutive services sit on different nodes, Return (last node ->
/// observer). The result-store upload is issued with Return and does not
/// delay the response.
class PipelineExecution {
 public:
  struct StepTiming {
    double start = 0.0;   // service start (after any queueing)
    double finish = 0.0;
  };

  /// The environments of every placed node must already be provisioned.
  PipelineExecution(Testbed& testbed, const WorkloadSpec& workload, const ServicePlacement& placement,
                    const AssetSpec& asset, std::uint64_t filter_seed);

  StepKind next_step() const noexcept { return next_; }
  bool done() const noexcept { return next_ == StepKind::Done; }

  /// Runs the next step arriving at `arrival`. Throws ExecFailure or
  /// TransferFailure with the workload and service named.
  StepTiming step(double arrival);

  const PipelineResult& result() const noexcept { return result_; }

 private:
  const std::string& node_of(std::size_t service) const;
  double finish_of(double arrival, double queue_wait, double wall, double started_at, const std::string& node) const;

  Testbed* testbed_;
  const WorkloadSpec* workload_;
  const ServicePlacement* placement_;
  const AssetSpec* asset_;
  CounterRng filter_rng_;
  StepKind next_ = StepKind::Deliver;
  std::size_t service_ = 0;     // next service to execute
  std::uint64_t current_bytes_ = 0;
  bool started_ = false;
  PipelineResult result_;
};

/// Runs a whole pipeline sequentially starting at the testbed's current time
/// and advances the clock to the response.
PipelineResult run_pipeline(Testbed& testbed, const WorkloadSpec& workload, const ServicePlacement& placement,
                            const AssetSpec& asset, std::uint64_t filter_seed);

}  // namespace fogbench
