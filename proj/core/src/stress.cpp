#include "fogbench/stress.hpp"

#include <algorithm>

#include "fogbench/node_runtime.hpp"

namespace fogbench {

namespace {

constexpr std::uint64_t kThrottleFileBytes = 256ull * 1000 * 1000;
constexpr double kThrottleRate = 21740.0;

std::vector<std::string> substitute(std::vector<std::string> argv, const std::string& token,
                                    const std::string& value) {
  for (auto& arg : argv) {
    for (auto pos = arg.find(token); pos != std::string::npos; pos = arg.find(token, pos + value.size())) {
      arg.replace(pos, token.size(), value);
    }
  }
  return argv;
}

}  // namespace

StressorSet stress_profile(StressLevel level, int node_core_count) {
  const int cores = std::max(node_core_count, 1);
  auto capped = [cores](int n) { return std::min(n, cores); };
  StressorSet set;
  switch (level) {
    case StressLevel::None:
      break;
    case StressLevel::Minimal:
      set.cpu_cores_stressed = capped(1);
      set.network_throttle = NetworkThrottle{kThrottleFileBytes, kThrottleRate};
      break;
    case StressLevel::Low:
      set.cpu_cores_stressed = capped(2);
      break;
    case StressLevel::Medium:
      set.cpu_cores_stressed = capped(3);
      break;
    case StressLevel::High:
      set.cpu_cores_stressed = capped(4);
      break;
    case StressLevel::VeryHigh:
      set.cpu_cores_stressed = cores;
      set.ram_stressor_count = 2;
      break;
  }
  return set;
}

double available_core_fraction(int core_count, int cores_stressed) {
  const double cores = std::max(core_count, 1);
  const double left = std::max(cores - static_cast<double>(std::max(cores_stressed, 0)), kCoreFloor);
  return std::min(left / cores, 1.0);
}

StressState derive_stress_state(const StressorSet& set, int core_count, double configured_bandwidth) {
  StressState state;
  state.active = set;
  state.available_core_fraction = available_core_fraction(core_count, set.cpu_cores_stressed);
  if (set.network_throttle && configured_bandwidth > 0.0) {
    state.bandwidth_fraction = std::min(1.0, set.network_throttle->rate / configured_bandwidth);
  }
  return state;
}

// ---------------------------------------------------------------------------

StressHandle::StressHandle(StressHandle&& other) noexcept
    : testbed_(std::exchange(other.testbed_, nullptr)),
      node_id_(std::move(other.node_id_)),
      set_(std::move(other.set_)),
      spawned_(std::move(other.spawned_)),
      active_(std::exchange(other.active_, false)) {}

StressHandle& StressHandle::operator=(StressHandle&& other) noexcept {
  if (this != &other) {
    if (active()) {
      try {
        release_stress(*this);
      } catch (...) {
      }
    }
    testbed_ = std::exchange(other.testbed_, nullptr);
    node_id_ = std::move(other.node_id_);
    set_ = std::move(other.set_);
    spawned_ = std::move(other.spawned_);
    active_ = std::exchange(other.active_, false);
  }
  return *this;
}

StressHandle::~StressHandle() {
  if (active()) {
    try {
      release_stress(*this);
    } catch (...) {
    }
  }
}

StressHandle apply_stress(Testbed& testbed, const std::string& node_id, const StressorSet& set) {
  const NodeSpec& spec = testbed.node(node_id);
  StressHandle handle;
  handle.testbed_ = &testbed;
  handle.node_id_ = node_id;
  handle.set_ = set;

  if (spec.is_virtual()) {
    const auto& p = spec.virtual_params();
    testbed.install_stress(node_id, derive_stress_state(set, p.core_count, p.uplink_bandwidth));
    handle.active_ = true;
    return handle;
  }

  testbed.install_stress(node_id, derive_stress_state(set, testbed.core_count(node_id), 0.0));
  handle.active_ = true;
  const auto& commands = testbed.stressor_commands();
  try {
    RemoteSession& session = testbed.session(node_id);
    if (set.cpu_cores_stressed > 0) {
      handle.spawned_.push_back(
          session.spawn(substitute(commands.cpu, "{count}", std::to_string(set.cpu_cores_stressed))));
    }
    if (set.ram_stressor_count > 0) {
      handle.spawned_.push_back(
          session.spawn(substitute(commands.ram, "{count}", std::to_string(set.ram_stressor_count))));
    }
    if (set.network_throttle) {
      auto argv = substitute(commands.network, "{file_bytes}", std::to_string(set.network_throttle->file_bytes));
      argv = substitute(std::move(argv), "{rate}",
                        std::to_string(static_cast<std::uint64_t>(set.network_throttle->rate)));
      handle.spawned_.push_back(session.spawn(argv));
    }
  } catch (const std::exception& e) {
    try {
      release_stress(handle);
    } catch (...) {
    }
    throw SpawnFailure("stressors on node '" + node_id + "': " + e.what());
  }
  return handle;
}

void release_stress(StressHandle& handle) {
  if (!handle.active()) {
    throw AlreadyReleased("stress on node '" + handle.node_id_ + "' is not active");
  }
  handle.active_ = false;
  Testbed& testbed = *handle.testbed_;
  testbed.clear_stress(handle.node_id_);
  if (!handle.spawned_.empty()) {
    RemoteSession& session = testbed.session(handle.node_id_);
    for (RemotePid pid : handle.spawned_) session.terminate(pid);
  }
}

}  // namespace fogbench
