#include "fogbench/node_runtime.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace fogbench {

std::string_view to_string(Direction direction) {
  switch (direction) {
    case Direction::Up:
      return "up";
    case Direction::Down:
      return "down";
    case Direction::CloudToEdge:
      return "cloud-to-edge";
    case Direction::ToResultStore:
      return "to-result-store";
  }
  return "?";
}

double virtual_exec_time(const VirtualParams& node, double work_units, const StressState& stress,
                         double jitter) {
  if (work_units <= 0.0) return 0.0;
  const double speed = node.compute_speed * stress.available_core_fraction;
  const double ram_penalty = 1.0 + node.ram_stressor_penalty * stress.active.ram_stressor_count;
  return work_units / speed * (1.0 + jitter) * ram_penalty;
}

double virtual_transfer_time(double latency, double bandwidth, std::uint64_t bytes, double jitter) {
  if (bytes == 0) return latency;
  return latency + static_cast<double>(bytes) / bandwidth * (1.0 + jitter);
}

namespace {

std::vector<std::string> substitute_tokens(std::vector<std::string> argv,
                                           const std::map<std::string, std::string>& tokens) {
  for (auto& arg : argv) {
    for (const auto& [token, value] : tokens) {
      for (auto pos = arg.find(token); pos != std::string::npos; pos = arg.find(token, pos + value.size())) {
        arg.replace(pos, token.size(), value);
      }
    }
  }
  return argv;
}

std::string trim(std::string s) {
  const char* ws = " \t\r\n";
  s.erase(0, s.find_first_not_of(ws));
  s.erase(s.find_last_not_of(ws) + 1);
  return s;
}

}  // namespace

Testbed::Testbed(std::vector<NodeSpec> nodes, ResultStoreSpec store, const TransportRegistry& registry)
    : specs_(std::move(nodes)),
      store_(std::move(store)),
      store_jitter_(store_.link.seed),
      registry_(&registry),
      epoch_(std::chrono::steady_clock::now()) {
  for (const auto& spec : specs_) {
    NodeState st{CounterRng(spec.is_virtual() ? spec.virtual_params().seed : 0), {}, {}, {}, false, {}, {}};
    if (!states_.emplace(spec.id, std::move(st)).second) {
      throw std::invalid_argument("duplicate node id '" + spec.id + "'");
    }
  }
}

Testbed::~Testbed() {
  for (auto& [id, st] : states_) {
    if (st.session) {
      try {
        st.session->close();
      } catch (...) {
      }
    }
  }
}

const NodeSpec& Testbed::node(std::string_view id) const {
  for (const auto& spec : specs_) {
    if (spec.id == id) return spec;
  }
  throw std::out_of_range("unknown node '" + std::string(id) + "'");
}

Testbed::NodeState& Testbed::state(std::string_view id) {
  auto it = states_.find(id);
  if (it == states_.end()) throw std::out_of_range("unknown node '" + std::string(id) + "'");
  return it->second;
}

const Testbed::NodeState& Testbed::state(std::string_view id) const {
  auto it = states_.find(id);
  if (it == states_.end()) throw std::out_of_range("unknown node '" + std::string(id) + "'");
  return it->second;
}

double Testbed::draw_jitter(CounterRng& rng, double fraction) {
  if (fraction <= 0.0) return 0.0;
  return rng.uniform(-fraction, fraction);
}

double Testbed::real_now() const {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - epoch_).count();
}

double Testbed::now() const {
  std::lock_guard lock(mutex_);
  return clock_;
}

void Testbed::advance_to(double time) {
  std::lock_guard lock(mutex_);
  clock_ = std::max(clock_, time);
}

RemoteSession& Testbed::session_locked(const std::string& node_id, NodeState& st) {
  if (!st.session) {
    const auto& params = node(node_id).transport_params();
    if (!st.transport) st.transport = registry_->create(params.adapter);
    st.session = st.transport->open(params.address);
  }
  return *st.session;
}

RemoteSession& Testbed::session(const std::string& node_id) {
  if (is_virtual(node_id)) throw std::logic_error("node '" + node_id + "' is virtual");
  std::lock_guard lock(mutex_);
  return session_locked(node_id, state(node_id));
}

int Testbed::core_count(std::string_view id) {
  const NodeSpec& spec = node(id);
  if (spec.is_virtual()) return spec.virtual_params().core_count;
  if (spec.transport_params().core_count) return *spec.transport_params().core_count;
  try {
    auto r = session(spec.id).exec({"nproc"});
    if (r.exit_code == 0) return std::max(1, std::stoi(trim(r.output)));
  } catch (const std::exception&) {
  }
  return 1;
}

// ---------------------------------------------------------------------------
// Environments
// ---------------------------------------------------------------------------

EnvironmentHandle Testbed::provision_environment(const std::string& node_id, const WorkloadSpec& workload) {
  std::lock_guard lock(mutex_);
  const auto key = std::make_pair(node_id, workload.name);
  if (auto it = environments_.find(key);
      it != environments_.end() && it->second.state == EnvironmentState::Running) {
    return it->second;
  }
  const NodeSpec& spec = node(node_id);
  NodeState& st = state(node_id);

  EnvironmentHandle handle{node_id, workload.name, EnvironmentState::Built, next_handle_++};
  if (!spec.is_virtual()) {
    const auto& params = spec.transport_params();
    try {
      RemoteSession& session = session_locked(node_id, st);
      auto argv = substitute_tokens(params.provision_command,
                                    {{"{workload}", workload.name}, {"{remote_dir}", params.remote_dir}});
      auto result = session.exec(argv);
      if (result.exit_code != 0) {
        throw ProvisionFailure(node_id, "'" + argv.front() + "' exited with " +
                                            std::to_string(result.exit_code) + ": " + trim(result.output));
      }
    } catch (const ProvisionFailure&) {
      throw;
    } catch (const std::exception& e) {
      throw ProvisionFailure(node_id, e.what());
    }
  }
  ++st.builds;
  handle.state = EnvironmentState::Running;
  environments_[key] = handle;
  return handle;
}

void Testbed::stop_environment(EnvironmentHandle& handle) {
  std::lock_guard lock(mutex_);
  auto it = environments_.find({handle.node_id, handle.workload_name});
  if (it != environments_.end() && it->second.id == handle.id) it->second.state = EnvironmentState::Stopped;
  handle.state = EnvironmentState::Stopped;
}

const EnvironmentHandle& Testbed::environment(const std::string& node_id, const std::string& workload) const {
  std::lock_guard lock(mutex_);
  auto it = environments_.find({node_id, workload});
  if (it == environments_.end() || it->second.state != EnvironmentState::Running) {
    throw std::out_of_range("no running environment for '" + workload + "' on node '" + node_id + "'");
  }
  return it->second;
}

std::size_t Testbed::build_count(const std::string& node_id) const {
  std::lock_guard lock(mutex_);
  return state(node_id).builds;
}

// ---------------------------------------------------------------------------
// Execution
// ---------------------------------------------------------------------------

ExecResult Testbed::exec_task(const EnvironmentHandle& handle, double work_units, const ExecOptions& options) {
  if (!(work_units >= 0.0)) throw std::invalid_argument("work_units must be >= 0");
  {
    std::lock_guard lock(mutex_);
    auto it = environments_.find({handle.node_id, handle.workload_name});
    if (handle.state != EnvironmentState::Running || it == environments_.end() ||
        it->second.id != handle.id || it->second.state != EnvironmentState::Running) {
      throw ExecFailure("environment for '" + handle.workload_name + "' on node '" + handle.node_id +
                        "' is not running");
    }
  }
  const NodeSpec& spec = node(handle.node_id);
  if (!spec.is_virtual()) return exec_external(handle, work_units, options);

  std::lock_guard lock(mutex_);
  NodeState& st = state(handle.node_id);
  const VirtualParams& params = spec.virtual_params();
  const StressState& stress = options.stress ? *options.stress : st.stress;
  const double service = virtual_exec_time(params, work_units, stress, draw_jitter(st.jitter, params.jitter_fraction));
  const double arrival = options.arrival.value_or(clock_);
  const double start = std::max(arrival, st.compute.free_at);
  st.compute.free_at = start + service;
  if (!options.arrival) clock_ = std::max(clock_, start + service);
  return ExecResult{handle.node_id, work_units, service, true, {}, start, start - arrival};
}

ExecResult Testbed::exec_external(const EnvironmentHandle& handle, double work_units, const ExecOptions& options) {
  const auto& params = node(handle.node_id).transport_params();
  NodeState* st;
  {
    std::lock_guard lock(mutex_);
    st = &state(handle.node_id);
  }
  const double requested = real_now();
  std::lock_guard busy(*st->busy);
  RemoteSession* session;
  {
    std::lock_guard lock(mutex_);
    try {
      session = &session_locked(handle.node_id, *st);
    } catch (const std::exception& e) {
      throw ExecFailure("node '" + handle.node_id + "': " + e.what());
    }
  }

  const bool own_command = options.service != nullptr && !options.service->command.empty();
  const auto& argv_template = own_command ? options.service->command : params.work_command;
  const std::string base = params.remote_dir + "/" + handle.workload_name;
  const auto work = static_cast<long long>(std::llround(work_units * params.work_scale));
  auto argv = substitute_tokens(argv_template, {{"{work}", std::to_string(work)},
                                                {"{input}", base + "/input"},
                                                {"{output}", base + "/output"},
                                                {"{workload}", handle.workload_name},
                                                {"{remote_dir}", params.remote_dir}});

  const double start = real_now();
  CommandResult result;
  try {
    result = session->exec(argv);
  } catch (const std::exception& e) {
    throw ExecFailure("node '" + handle.node_id + "': " + e.what());
  }
  const double finish = real_now();

  ExecResult out{handle.node_id, work_units, finish - start, result.exit_code == 0, result.output, start,
                 start - requested};
  if (!out.exit_ok) {
    throw ExecFailure("node '" + handle.node_id + "': '" + argv.front() + "' exited with " +
                      std::to_string(result.exit_code) + (result.output.empty() ? "" : ": " + trim(result.output)));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Transfers
// ---------------------------------------------------------------------------

TransferResult Testbed::transfer(const Endpoint& src, const Endpoint& dst, std::uint64_t bytes,
                                 Direction direction, std::optional<double> arrival) {
  const bool external = (src.kind == Endpoint::Kind::Node && !is_virtual(src.node_id)) ||
                        (dst.kind == Endpoint::Kind::Node && !is_virtual(dst.node_id));
  if (external) return transfer_external(src, dst, bytes, direction);
  return transfer_virtual(src, dst, bytes, direction, arrival);
}

TransferResult Testbed::transfer_virtual(const Endpoint& src, const Endpoint& dst, std::uint64_t bytes,
                                         Direction direction, std::optional<double> arrival) {
  std::lock_guard lock(mutex_);
  const double start_arrival = arrival.value_or(clock_);

  if (dst.kind == Endpoint::Kind::ResultStore && store_.kind == ResultStoreSpec::Kind::None) {
    return TransferResult{bytes, 0.0, 0.0, direction, start_arrival, 0.0};
  }

  constexpr double kUnbounded = std::numeric_limits<double>::infinity();
  double bandwidth = kUnbounded;
  double latency = 0.0;
  std::vector<Resource*> resources;

  auto leg = [&](const Endpoint& e, bool outbound) {
    switch (e.kind) {
      case Endpoint::Kind::Observer:
        break;
      case Endpoint::Kind::Node: {
        const auto& p = node(e.node_id).virtual_params();
        NodeState& st = state(e.node_id);
        const double configured = outbound ? p.downlink_bandwidth : p.uplink_bandwidth;
        bandwidth = std::min(bandwidth, configured * st.stress.bandwidth_fraction);
        latency += p.link_latency;
        resources.push_back(&st.network);
        break;
      }
      case Endpoint::Kind::ResultStore:
        bandwidth = std::min(bandwidth, outbound ? store_.link.downlink_bandwidth : store_.link.uplink_bandwidth);
        latency += store_.link.link_latency;
        break;
    }
  };
  leg(src, true);
  leg(dst, false);
  // Result-store uploads run detached from the node's request path.
  if (dst.kind == Endpoint::Kind::ResultStore) resources.clear();

  // Jitter comes from the generator that owns the receiving side of the link.
  double jitter = 0.0;
  const Endpoint& owner = dst.kind == Endpoint::Kind::Observer ? src : dst;
  if (owner.kind == Endpoint::Kind::Node) {
    jitter = draw_jitter(state(owner.node_id).jitter, node(owner.node_id).virtual_params().jitter_fraction);
  } else if (owner.kind == Endpoint::Kind::ResultStore) {
    jitter = draw_jitter(store_jitter_, store_.link.jitter_fraction);
  }

  double wall = 0.0;
  if (dst.kind == Endpoint::Kind::ResultStore && store_.kind == ResultStoreSpec::Kind::Directory) {
    const double t0 = real_now();
    std::error_code ec;
    std::filesystem::create_directories(store_.directory, ec);
    const auto path = store_.directory / ("result-" + std::to_string(transfer_counter_++));
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    std::vector<char> zeros(bytes);
    out.write(zeros.data(), static_cast<std::streamsize>(zeros.size()));
    if (!out) throw TransferFailure("cannot write result store file " + path.string());
    wall = real_now() - t0;
  } else {
    if (bandwidth == kUnbounded) bandwidth = std::numeric_limits<double>::max();
    wall = virtual_transfer_time(latency, bandwidth, bytes, jitter);
  }

  double start = start_arrival;
  for (Resource* r : resources) start = std::max(start, r->free_at);
  for (Resource* r : resources) r->free_at = start + wall;
  if (!arrival) clock_ = std::max(clock_, start + wall);

  TransferResult out{bytes, wall, 0.0, direction, start, start - start_arrival};
  if (bytes > 0 && wall > 0.0) out.rate = static_cast<double>(bytes) / wall;
  return out;
}

TransferResult Testbed::transfer_external(const Endpoint& src, const Endpoint& dst, std::uint64_t bytes,
                                          Direction direction) {
  const double requested = real_now();

  // Lock the external endpoints in id order.
  std::vector<std::string> ids;
  for (const Endpoint* e : {&src, &dst}) {
    if (e->kind == Endpoint::Kind::Node && !is_virtual(e->node_id)) ids.push_back(e->node_id);
  }
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  std::vector<std::unique_lock<std::mutex>> locks;
  for (const auto& id : ids) {
    std::mutex* m;
    {
      std::lock_guard lock(mutex_);
      m = state(id).busy.get();
    }
    locks.emplace_back(*m);
  }

  auto external_session = [&](const Endpoint& e) -> RemoteSession* {
    if (e.kind != Endpoint::Kind::Node || is_virtual(e.node_id)) return nullptr;
    std::lock_guard lock(mutex_);
    return &session_locked(e.node_id, state(e.node_id));
  };

  std::string path;
  {
    std::lock_guard lock(mutex_);
    path = "xfer/payload-" + std::to_string(transfer_counter_++);
  }
  std::vector<std::uint8_t> payload(bytes, 0);
  double start = 0.0;
  double finish = 0.0;
  try {
    RemoteSession* from = external_session(src);
    RemoteSession* to = external_session(dst);
    const std::string from_path =
        from ? node(src.node_id).transport_params().remote_dir + "/" + path : std::string();
    const std::string to_path = to ? node(dst.node_id).transport_params().remote_dir + "/" + path : std::string();
    if (from) from->put(payload, from_path);  // staging, untimed

    start = real_now();
    std::vector<std::uint8_t> data = from ? from->get(from_path) : payload;
    if (to) to->put(data, to_path);
    if (dst.kind == Endpoint::Kind::ResultStore && store_.kind == ResultStoreSpec::Kind::Directory) {
      std::error_code ec;
      std::filesystem::create_directories(store_.directory, ec);
      std::ofstream out(store_.directory / ("result-" + std::to_string(transfer_counter_)), std::ios::binary);
      out.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
      if (!out) throw TransferFailure("cannot write result store");
    }
    finish = real_now();
    if (dst.kind == Endpoint::Kind::ResultStore && store_.kind == ResultStoreSpec::Kind::Virtual) {
      std::lock_guard lock(mutex_);
      finish += virtual_transfer_time(store_.link.link_latency, store_.link.uplink_bandwidth, bytes,
                                      draw_jitter(store_jitter_, store_.link.jitter_fraction));
    }
  } catch (const TransferFailure&) {
    throw;
  } catch (const std::exception& e) {
    throw TransferFailure(std::string(to_string(direction)) + " transfer of " + std::to_string(bytes) +
                          " bytes failed: " + e.what());
  }

  TransferResult out{bytes, finish - start, 0.0, direction, start, start - requested};
  if (bytes > 0 && out.wall_time > 0.0) out.rate = static_cast<double>(bytes) / out.wall_time;
  return out;
}

// ---------------------------------------------------------------------------
// Platform probe
// ---------------------------------------------------------------------------

PlatformMetrics Testbed::probe_platform(const std::string& node_id, const ProbeSettings& settings) {
  const NodeSpec& spec = node(node_id);
  PlatformMetrics m;

  if (spec.is_virtual()) {
    const auto& p = spec.virtual_params();
    m.cpu_model = p.cpu_model;
    m.core_count = p.core_count;
    m.cpu_frequency = p.cpu_frequency;
    m.uptime = p.uptime + now();
    m.io_read_rate = p.io_read_rate;
    m.io_write_rate = p.io_write_rate;
    {
      std::lock_guard lock(mutex_);
      NodeState& st = state(node_id);
      const double work = p.unzip_work_per_byte * static_cast<double>(settings.archive_bytes);
      const double service = virtual_exec_time(p, work, st.stress, draw_jitter(st.jitter, p.jitter_fraction));
      const double start = std::max(clock_, st.compute.free_at);
      st.compute.free_at = start + service;
      clock_ = start + service;
      m.unzip_time = service;
    }
    auto dl = transfer(Endpoint::observer(), Endpoint::node(node_id), settings.download_bytes, Direction::Up);
    m.download_rate = dl.rate;
    return m;
  }

  const auto& params = spec.transport_params();
  RemoteSession* session_ptr;
  try {
    session_ptr = &session(node_id);
  } catch (const std::exception& e) {
    throw ProbeFailure("node '" + node_id + "' unreachable: " + e.what());
  }
  RemoteSession& s = *session_ptr;
  const std::string dir = params.remote_dir;

  auto attempt = [&](const char* field, auto&& fn) {
    try {
      fn();
    } catch (const std::exception& e) {
      m.missing.push_back(std::string(field) + ": " + e.what());
    }
  };
  auto run = [&](const std::vector<std::string>& argv) {
    auto r = s.exec(argv);
    if (r.exit_code != 0) throw ProbeFailure("'" + argv.back() + "' exited with " + std::to_string(r.exit_code));
    return trim(r.output);
  };
  auto timed = [&](const std::vector<std::string>& argv) {
    const double t0 = real_now();
    run(argv);
    return real_now() - t0;
  };
  auto number = [](const std::string& text) {
    std::istringstream in(text);
    double v;
    if (!(in >> v)) throw ProbeFailure("unparseable output '" + text + "'");
    return v;
  };

  attempt("cpu_model", [&] {
    auto out = run({"sh", "-c", "grep -m1 'model name' /proc/cpuinfo | cut -d: -f2"});
    if (out.empty()) throw ProbeFailure("empty output");
    m.cpu_model = out;
  });
  attempt("core_count", [&] { m.core_count = static_cast<int>(number(run({"nproc"}))); });
  attempt("cpu_frequency", [&] {
    auto out = run({"sh", "-c",
                    "cat /sys/devices/system/cpu/cpu0/cpufreq/cpuinfo_max_freq 2>/dev/null || "
                    "awk -F: '/cpu MHz/ {print $2 * 1000; exit}' /proc/cpuinfo"});
    m.cpu_frequency = number(out) * 1e3;
  });
  attempt("uptime", [&] { m.uptime = number(run({"cat", "/proc/uptime"})); });
  attempt("unzip_time", [&] {
    run({"sh", "-c",
         "mkdir -p " + dir + " && head -c " + std::to_string(settings.archive_bytes) +
             " /dev/urandom | gzip -1 > " + dir + "/probe.gz"});
    m.unzip_time = timed({"sh", "-c", "gzip -dc " + dir + "/probe.gz > /dev/null"});
    run({"rm", "-f", dir + "/probe.gz"});
  });
  attempt("download_rate", [&] {
    auto r = transfer(Endpoint::observer(), Endpoint::node(node_id), settings.download_bytes, Direction::Up);
    m.download_rate = r.rate;
  });
  const auto megabytes = std::to_string(std::max<std::uint64_t>(1, settings.io_bytes / 1000000));
  const double io_bytes = static_cast<double>(std::max<std::uint64_t>(1, settings.io_bytes / 1000000) * 1000000);
  attempt("io_write_rate", [&] {
    const double t = timed({"sh", "-c",
                            "mkdir -p " + dir + " && dd if=/dev/zero of=" + dir +
                                "/probe.io bs=1000000 count=" + megabytes + " conv=fsync 2>/dev/null"});
    if (t <= 0.0) throw ProbeFailure("zero duration");
    m.io_write_rate = io_bytes / t;
  });
  attempt("io_read_rate", [&] {
    const double t = timed({"sh", "-c", "dd if=" + dir + "/probe.io of=/dev/null bs=1000000 2>/dev/null"});
    if (t <= 0.0) throw ProbeFailure("zero duration");
    m.io_read_rate = io_bytes / t;
  });
  attempt("cleanup", [&] { run({"rm", "-f", dir + "/probe.io"}); });
  std::erase_if(m.missing, [](const std::string& s) { return s.starts_with("cleanup"); });
  return m;
}

// ---------------------------------------------------------------------------
// Stress bookkeeping
// ---------------------------------------------------------------------------

const StressState& Testbed::stress_state(const std::string& node_id) const {
  std::lock_guard lock(mutex_);
  return state(node_id).stress;
}

void Testbed::install_stress(const std::string& node_id, StressState stress) {
  std::lock_guard lock(mutex_);
  NodeState& st = state(node_id);
  if (st.stress_active) throw StressAlreadyActive("stress already active on node '" + node_id + "'");
  st.stress = std::move(stress);
  st.stress_active = true;
}

void Testbed::clear_stress(const std::string& node_id) {
  std::lock_guard lock(mutex_);
  NodeState& st = state(node_id);
  st.stress = StressState{};
  st.stress_active = false;
}

std::size_t Testbed::active_stress_count() const {
  std::lock_guard lock(mutex_);
  return static_cast<std::size_t>(
      std::count_if(states_.begin(), states_.end(), [](const auto& kv) { return kv.second.stress_active; }));
}

}  // namespace fogbench
