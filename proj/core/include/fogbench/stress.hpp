#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fogbench/domain.hpp"
#include "fogbench/transport.hpp"

namespace fogbench {

class Testbed;

struct NetworkThrottle {
  std::uint64_t file_bytes = 0;
  double rate = 0.0;  // bytes / s
  bool operator==(const NetworkThrottle&) const = default;
};

/// Background load applied to one node. cpu_cores_stressed is already
/// resolved against the node's core count.
struct StressorSet {
  int cpu_cores_stressed = 0;
  int ram_stressor_count = 0;
  std::optional<NetworkThrottle> network_throttle;

  bool empty() const noexcept {
    return cpu_cores_stressed == 0 && ram_stressor_count == 0 && !network_throttle;
  }
  bool operator==(const StressorSet&) const = default;
};

/// Cores left to a task when some are stressed. "All cores stressed" keeps a
/// quarter core so throughput degrades without reaching zero.
inline constexpr double kCoreFloor = 0.25;

/// Effective-capacity snapshot of a node under stress. Fractions lie in (0, 1].
struct StressState {
  StressorSet active;
  double available_core_fraction = 1.0;
  double bandwidth_fraction = 1.0;

  bool operator==(const StressState&) const = default;
};

/// Stressor sets per level: Minimal = 1 core plus a 256 MB transfer throttled
/// to 21,740 B/s; Low/Medium/High = 2/3/4 cores; VeryHigh = every core plus two
/// RAM stressors. Core counts are capped at the node's core count.
StressorSet stress_profile(StressLevel level, int node_core_count);

/// max(cores - stressed, kCoreFloor) / cores
double available_core_fraction(int core_count, int cores_stressed);

/// Fractions for a node with `core_count` cores whose configured bandwidth
/// (the uplink of its access link) is `configured_bandwidth`.
StressState derive_stress_state(const StressorSet& set, int core_count, double configured_bandwidth);

/// argv templates for external stressors. Tokens: {count}, {file_bytes}, {rate}.
struct StressorCommands {
  std::vector<std::string> cpu = {"stress", "--cpu", "{count}"};
  std::vector<std::string> ram = {"stress", "--vm", "{count}"};
  std::vector<std::string> network = {
      "sh", "-c", "head -c {file_bytes} /dev/urandom | pv -q -L {rate} > /dev/null"};
};

/// Move-only token for stress applied to one node. Destroying an active
/// handle releases it.
class StressHandle {
 public:
  StressHandle() = default;
  StressHandle(StressHandle&& other) noexcept;
  StressHandle& operator=(StressHandle&& other) noexcept;
  StressHandle(const StressHandle&) = delete;
  StressHandle& operator=(const StressHandle&) = delete;
  ~StressHandle();

  bool active() const noexcept { return testbed_ != nullptr && active_; }
  const std::string& node_id() const noexcept { return node_id_; }
  const StressorSet& stressors() const noexcept { return set_; }
  const std::vector<RemotePid>& spawned() const noexcept { return spawned_; }

 private:
  friend StressHandle apply_stress(Testbed& testbed, const std::string& node_id, const StressorSet& set);
  friend void release_stress(StressHandle& handle);

  Testbed* testbed_ = nullptr;
  std::string node_id_;
  StressorSet set_;
  std::vector<RemotePid> spawned_;
  bool active_ = false;
};

/// Virtual nodes get their StressState updated; external nodes get stressor
/// processes spawned through the transport. Throws StressAlreadyActive or
/// SpawnFailure.
StressHandle apply_stress(Testbed& testbed, const std::string& node_id, const StressorSet& set);

/// Restores full capacity and terminates spawned stressors. Throws
/// AlreadyReleased on a released or empty handle.
void release_stress(StressHandle& handle);

}  // namespace fogbench
