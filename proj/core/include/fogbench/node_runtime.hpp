#pragma once

#include <chrono>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "fogbench/domain.hpp"
#include "fogbench/rng.hpp"
#include "fogbench/stress.hpp"
#include "fogbench/transport.hpp"

namespace fogbench {

enum class Direction { Up, Down, CloudToEdge, ToResultStore };

std::string_view to_string(Direction direction);

struct ExecResult {
  std::string node_id;
  double work_units = 0.0;
  double wall_time = 0.0;   // service time, s
  bool exit_ok = true;
  std::string log;
  double started_at = 0.0;  // testbed time
  double queue_wait = 0.0;  // time spent waiting for the node, s
};

struct TransferResult {
  std::uint64_t bytes = 0;
  double wall_time = 0.0;   // s; latency only when bytes == 0
  double rate = 0.0;        // bytes / wall_time, 0 for empty transfers
  Direction direction = Direction::Up;
  double started_at = 0.0;
  double queue_wait = 0.0;
};

/// Table of platform characteristics; absent values are listed in `missing`.
struct PlatformMetrics {
  std::optional<std::string> cpu_model;
  std::optional<int> core_count;
  std::optional<double> cpu_frequency;   // Hz
  std::optional<double> uptime;          // s
  std::optional<double> unzip_time;      // s
  std::optional<double> download_rate;   // bytes / s
  std::optional<double> io_read_rate;    // bytes / s
  std::optional<double> io_write_rate;   // bytes / s
  std::vector<std::string> missing;      // "<field>: <reason>"

  bool operator==(const PlatformMetrics&) const = default;
};

enum class EnvironmentState { Built, Running, Stopped };

struct EnvironmentHandle {
  std::string node_id;
  std::string workload_name;
  EnvironmentState state = EnvironmentState::Built;
  std::uint64_t id = 0;

  bool operator==(const EnvironmentHandle&) const = default;
};

/// One side of a transfer.
struct Endpoint {
  enum class Kind { Observer, Node, ResultStore };
  Kind kind = Kind::Observer;
  std::string node_id;

  static Endpoint observer() { return {Kind::Observer, {}}; }
  static Endpoint node(std::string id) { return {Kind::Node, std::move(id)}; }
  static Endpoint result_store() { return {Kind::ResultStore, {}}; }
};

// Virtual cost model ---------------------------------------------------------

/// (work / (compute_speed * core_fraction)) * (1 + jitter) * (1 + penalty * ram_stressors)
double virtual_exec_time(const VirtualParams& node, double work_units, const StressState& stress,
                         double jitter);

/// latency + bytes / bandwidth * (1 + jitter)
double virtual_transfer_time(double latency, double bandwidth, std::uint64_t bytes, double jitter);

struct ExecOptions {
  /// Testbed time at which the task reaches the node; defaults to now() and
  /// advances the clock to the task's completion.
  std::optional<double> arrival;
  /// Overrides the node's current stress snapshot (virtual nodes).
  std::optional<StressState> stress;
  /// Service whose command runs on external nodes.
  const ServiceSpec* service = nullptr;
  std::uint64_t input_bytes = 0;
};

/// Owns every node of a run, the logical clock and per-node FIFO resources.
///
/// Virtual nodes never touch the OS clock: each node has a compute resource
/// and a network resource that serve requests in arrival order on the logical
/// clock. External nodes are driven through a RemoteTransport and timed with a
/// steady clock; their operations are serialized per node.
class Testbed {
 public:
  explicit Testbed(std::vector<NodeSpec> nodes, ResultStoreSpec store = {},
                   const TransportRegistry& registry = TransportRegistry::global());
  ~Testbed();
  Testbed(const Testbed&) = delete;
  Testbed& operator=(const Testbed&) = delete;

  const NodeSpec& node(std::string_view id) const;
  const std::vector<NodeSpec>& nodes() const noexcept { return specs_; }
  bool is_virtual(std::string_view id) const { return node(id).is_virtual(); }
  int core_count(std::string_view id);

  /// Idempotent per (node, workload). Throws ProvisionFailure.
  EnvironmentHandle provision_environment(const std::string& node_id, const WorkloadSpec& workload);
  void stop_environment(EnvironmentHandle& handle);
  /// The running environment of a pair; throws std::out_of_range if absent.
  const EnvironmentHandle& environment(const std::string& node_id, const std::string& workload) const;
  /// Number of environment builds performed on a node.
  std::size_t build_count(const std::string& node_id) const;

  /// Throws ExecFailure when the environment is not running or the remote
  /// command exits nonzero.
  ExecResult exec_task(const EnvironmentHandle& handle, double work_units, const ExecOptions& options = {});

  /// Throws TransferFailure.
  TransferResult transfer(const Endpoint& src, const Endpoint& dst, std::uint64_t bytes,
                          Direction direction, std::optional<double> arrival = {});

  PlatformMetrics probe_platform(const std::string& node_id, const ProbeSettings& settings = {});

  // Stress bookkeeping ------------------------------------------------------
  const StressState& stress_state(const std::string& node_id) const;
  void install_stress(const std::string& node_id, StressState state);
  void clear_stress(const std::string& node_id);
  std::size_t active_stress_count() const;
  const StressorCommands& stressor_commands() const noexcept { return stressor_commands_; }
  void set_stressor_commands(StressorCommands commands) { stressor_commands_ = std::move(commands); }

  /// Session of an external node, opened on first use. Throws TransportError.
  RemoteSession& session(const std::string& node_id);

  // Clock -------------------------------------------------------------------
  double now() const;
  void advance_to(double time);

 private:
  struct Resource {
    double free_at = 0.0;
  };
  struct NodeState {
    CounterRng jitter;
    Resource compute;
    Resource network;
    StressState stress;
    bool stress_active = false;
    std::shared_ptr<RemoteTransport> transport;
    std::unique_ptr<RemoteSession> session;
    std::unique_ptr<std::mutex> busy = std::make_unique<std::mutex>();
    std::size_t builds = 0;
  };

  NodeState& state(std::string_view id);
  const NodeState& state(std::string_view id) const;
  double draw_jitter(CounterRng& rng, double fraction);
  double real_now() const;
  RemoteSession& session_locked(const std::string& node_id, NodeState& st);

  TransferResult transfer_virtual(const Endpoint& src, const Endpoint& dst, std::uint64_t bytes,
                                  Direction direction, std::optional<double> arrival);
  TransferResult transfer_external(const Endpoint& src, const Endpoint& dst, std::uint64_t bytes,
                                   Direction direction);
  ExecResult exec_external(const EnvironmentHandle& handle, double work_units, const ExecOptions& options);

  std::vector<NodeSpec> specs_;
  std::map<std::string, NodeState, std::less<>> states_;
  ResultStoreSpec store_;
  CounterRng store_jitter_;
  const TransportRegistry* registry_;
  StressorCommands stressor_commands_;

  mutable std::recursive_mutex mutex_;  // guards virtual state and the maps
  std::map<std::pair<std::string, std::string>, EnvironmentHandle> environments_;
  std::uint64_t next_handle_ = 1;
  std::uint64_t transfer_counter_ = 0;
  double clock_ = 0.0;
  std::chrono::steady_clock::time_point epoch_;
};

}  // namespace fogbench
