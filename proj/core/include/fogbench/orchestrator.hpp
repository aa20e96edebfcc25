#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fogbench/domain.hpp"
#include "fogbench/loadgen.hpp"
#include "fogbench/metrics.hpp"
#include "fogbench/node_runtime.hpp"

namespace fogbench {

struct Record {
  ExperimentKey key;
  TimingBreakdown timing;
  AppMetrics metrics;
  std::optional<LoadSummary> load;
  bool success = true;
  std::string error;
};

struct ResultSet {
  explicit ResultSet(ValidatedRunConfig config) : config(std::move(config)) {}

  std::vector<Record> records;
  std::map<std::string, PlatformMetrics> platform;  // per probed node
  ValidatedRunConfig config;                         // post-override snapshot
  std::uint64_t seed = 0;

  std::size_t failure_count() const;
};

struct OffloadResult {
  double t4 = 0.0;
  std::uint64_t bytes = 0;
};

/// Ships the offload payloads of the edge-placed services from the offload
/// source to their edge nodes, one transfer per edge node. A placement with
/// nothing on the edge yields {0, 0}. Throws TransferFailure.
OffloadResult offload_assets(Testbed& testbed, const WorkloadSpec& workload, const ServicePlacement& placement);

/// One experiment cell in execution order.
struct Cell {
  CellKey key;
  const WorkloadSpec* workload = nullptr;
};

/// Expands a validated config into its cells: workload, then mode, then
/// placement, then stress level, then user count. CloudEdge cells use the
/// explicit placements of a workload when given, otherwise the full-offload
/// placement followed by every prefix split, per (cloud, edge) node pair.
std::vector<Cell> enumerate_cells(const RunConfig& config);

struct CellSummary {
  CellKey key;
  std::size_t records = 0;
  std::size_t failures = 0;
  double mean_rtt = 0.0;  // over successful records, 0 if none
};

struct RunOptions {
  const TransportRegistry* registry = nullptr;  // defaults to the global registry
  bool probe_platforms = true;
  std::function<void(const CellSummary&)> on_cell;
  /// Called with the testbed before the first cell (tests install stressor
  /// commands or inspect state through it).
  std::function<void(Testbed&)> on_testbed;
};

/// Runs every cell: provision, offload (cloud-edge), apply stress, run every
/// asset `repetitions` times (through loadgen when users > 1), release
/// stress. Per-record failures are recorded, never thrown.
ResultSet run_benchmark(const ValidatedRunConfig& config, const RunOptions& options = {});

/// The seed each virtual node's jitter generator uses in a run.
std::uint64_t node_seed(std::uint64_t run_seed, const NodeSpec& node);

}  // namespace fogbench
