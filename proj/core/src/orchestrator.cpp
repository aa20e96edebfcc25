#include "fogbench/orchestrator.hpp"

#include <algorithm>
#include <cmath>

#include "fogbench/pipeline.hpp"
#include "fogbench/rng.hpp"
#include "fogbench/stress.hpp"

namespace fogbench {

std::size_t ResultSet::failure_count() const {
  return static_cast<std::size_t>(
      std::count_if(records.begin(), records.end(), [](const Record& r) { return !r.success; }));
}

std::uint64_t node_seed(std::uint64_t run_seed, const NodeSpec& node) {
  const std::uint64_t configured = node.is_virtual() ? node.virtual_params().seed : 0;
  return splitmix64(run_seed ^ splitmix64(configured ^ fnv1a64(node.id)));
}

OffloadResult offload_assets(Testbed& testbed, const WorkloadSpec& workload, const ServicePlacement& placement) {
  std::optional<std::string> source = placement.offload_source;
  std::vector<std::pair<std::string, std::uint64_t>> per_edge;  // placement order
  for (const auto& a : placement.assignments) {
    const NodeSpec& n = testbed.node(a.node);
    if (n.tier == Tier::Cloud) {
      if (!source) source = a.node;
      continue;
    }
    const ServiceSpec* svc = workload.find_service(a.service);
    const std::uint64_t bytes = svc ? svc->offload_payload_bytes : 0;
    auto it = std::find_if(per_edge.begin(), per_edge.end(), [&](const auto& e) { return e.first == a.node; });
    if (it == per_edge.end()) {
      per_edge.emplace_back(a.node, bytes);
    } else {
      it->second += bytes;
    }
  }
  OffloadResult out;
  if (per_edge.empty()) return out;
  if (!source) throw TransferFailure("workload '" + workload.name + "': no cloud node to offload from");
  for (const auto& [edge, bytes] : per_edge) {
    try {
      auto r = testbed.transfer(Endpoint::node(*source), Endpoint::node(edge), bytes, Direction::CloudToEdge);
      out.t4 += r.wall_time;
      out.bytes += bytes;
    } catch (const TransferFailure&) {
      throw;
    } catch (const std::exception& e) {
      throw TransferFailure("offload to '" + edge + "': " + e.what());
    }
  }
  return out;
}

std::vector<Cell> enumerate_cells(const RunConfig& config) {
  std::vector<Cell> cells;
  for (const auto& w : config.workloads) {
    for (DeploymentMode mode : config.modes) {
      std::vector<ServicePlacement> placements;
      auto tier_nodes = [&](Tier tier) {
        std::vector<std::string> ids;
        for (const auto& n : config.nodes) {
          if (n.tier == tier) ids.push_back(n.id);
        }
        return ids;
      };
      switch (mode) {
        case DeploymentMode::CloudOnly:
          for (const auto& c : tier_nodes(Tier::Cloud)) {
            for (auto& p : placements_for_mode(w, mode, c, {})) placements.push_back(std::move(p));
          }
          break;
        case DeploymentMode::EdgeOnly:
          for (const auto& e : tier_nodes(Tier::Edge)) {
            for (auto& p : placements_for_mode(w, mode, {}, e)) placements.push_back(std::move(p));
          }
          break;
        case DeploymentMode::CloudEdge: {
          for (const auto& np : config.placements) {
            if (np.workload == w.name) placements.push_back(np.placement);
          }
          if (!placements.empty()) break;
          for (const auto& c : tier_nodes(Tier::Cloud)) {
            for (const auto& e : tier_nodes(Tier::Edge)) {
              placements.push_back(full_offload_placement(w, c, e));
              for (auto& p : placements_for_mode(w, mode, c, e)) placements.push_back(std::move(p));
            }
          }
          break;
        }
      }
      for (const auto& p : placements) {
        for (StressLevel s : config.stress_levels) {
          for (int users : config.user_counts) {
            cells.push_back({CellKey{w.name, mode, p, s, users}, &w});
          }
        }
      }
    }
  }
  return cells;
}

namespace {

std::vector<std::string> cell_nodes(const CellKey& key) {
  std::vector<std::string> ids;
  for (const auto& a : key.placement.assignments) {
    if (std::find(ids.begin(), ids.end(), a.node) == ids.end()) ids.push_back(a.node);
  }
  if (key.mode == DeploymentMode::CloudEdge && key.placement.offload_source &&
      std::find(ids.begin(), ids.end(), *key.placement.offload_source) == ids.end()) {
    ids.push_back(*key.placement.offload_source);
  }
  return ids;
}

bool stress_applies(StressTarget target, Tier tier) {
  switch (target) {
    case StressTarget::Edge:
      return tier == Tier::Edge;
    case StressTarget::Cloud:
      return tier == Tier::Cloud;
    case StressTarget::All:
      return true;
  }
  return false;
}

/// Mode and placement are left out so that every deployment of a workload
/// sees the same filter decisions for the same asset and repetition.
std::uint64_t record_seed(std::uint64_t run_seed, const ExperimentKey& key) {
  std::uint64_t h = fnv1a64(key.cell.workload);
  h = fnv1a64(to_string(key.cell.stress), h);
  h = fnv1a64(std::to_string(key.cell.users), h);
  h = fnv1a64(key.asset, h);
  h = fnv1a64(std::to_string(key.repetition), h);
  return splitmix64(run_seed ^ h);
}

/// Field-wise mean of the successful requests of a load run.
TimingBreakdown mean_timing(const std::vector<RequestRecord>& records) {
  TimingBreakdown t;
  double up = 0, down = 0;
  std::size_t n = 0;
  for (const auto& r : records) {
    if (!r.success) continue;
    const auto& p = r.pipeline.timing;
    t.t1 += p.t1;
    t.et += p.et;
    t.t2 += p.t2;
    t.t3 += p.t3;
    up += static_cast<double>(p.bytes_up);
    down += static_cast<double>(p.bytes_down);
    t.file_length = p.file_length;
    ++n;
  }
  if (n == 0) return t;
  const double d = static_cast<double>(n);
  t.t1 /= d;
  t.et /= d;
  t.t2 /= d;
  t.t3 /= d;
  t.bytes_up = static_cast<std::uint64_t>(std::llround(up / d));
  t.bytes_down = static_cast<std::uint64_t>(std::llround(down / d));
  return t;
}

class CellRunner {
 public:
  CellRunner(const RunConfig& config, Testbed& testbed, ResultSet& results)
      : config_(config), testbed_(testbed), results_(results) {}

  void run(const Cell& cell) {
    const WorkloadSpec& w = *cell.workload;
    const CellKey& key = cell.key;
    const std::size_t first = results_.records.size();

    OffloadResult offload;
    std::vector<StressHandle> stress;
    try {
      for (const auto& id : cell_nodes(key)) testbed_.provision_environment(id, w);
      if (key.mode == DeploymentMode::CloudEdge) offload = offload_assets(testbed_, w, key.placement);
      if (key.stress != StressLevel::None) {
        for (const auto& id : cell_nodes(key)) {
          if (!stress_applies(config_.stress_target, testbed_.node(id).tier)) continue;
          stress.push_back(apply_stress(testbed_, id, stress_profile(key.stress, testbed_.core_count(id))));
        }
      }
    } catch (const Error& e) {
      fail_all(cell, e.what());
      stress.clear();
      summarize_cell(key, first);
      return;
    }

    for (int rep = 1; rep <= config_.repetitions; ++rep) {
      for (const auto& asset : w.assets) {
        Record rec;
        rec.key = ExperimentKey{key, asset.id, rep};
        const std::uint64_t seed = record_seed(config_.seed, rec.key);
        try {
          if (key.users == 1) {
            rec.timing = run_pipeline(testbed_, w, key.placement, asset, seed).timing;
          } else {
            run_load_record(rec, w, key, asset, seed);
          }
        } catch (const Error& e) {
          rec.success = false;
          rec.error = e.what();
          rec.timing = TimingBreakdown{};
        }
        if (rec.success) {
          rec.timing.t4 = offload.t4;
          rec.timing.bytes_down_cloud_edge = offload.bytes;
        }
        rec.metrics = compute_app_metrics(rec.timing, config_.cost_rate_per_hour);
        results_.records.push_back(std::move(rec));
      }
    }
    stress.clear();  // releases before the next cell
    summarize_cell(key, first);
  }

  std::function<void(const CellSummary&)> on_cell;

 private:
  void run_load_record(Record& rec, const WorkloadSpec& w, const CellKey& key, const AssetSpec& asset,
                       std::uint64_t seed) {
    LoadProfile profile;
    profile.user_count = key.users;
    profile.think_time = config_.load.think_time;
    if (config_.load.duration_seconds) {
      profile.requests_per_user.reset();
      profile.duration_seconds = config_.load.duration_seconds;
    } else {
      profile.requests_per_user = config_.load.requests_per_user;
    }
    LoadRun run = run_load(profile, testbed_, LoadTarget{&w, &key.placement, &asset, seed});
    rec.load = summarize(run.records, run.wall_duration);
    rec.timing = mean_timing(run.records);
    if (rec.load->fail_count > 0) {
      rec.success = false;
      auto it = std::find_if(run.records.begin(), run.records.end(), [](const auto& r) { return !r.success; });
      rec.error = std::to_string(rec.load->fail_count) + " of " + std::to_string(rec.load->throughput) +
                  " requests failed: " + it->error;
    }
  }

  void fail_all(const Cell& cell, const std::string& error) {
    for (int rep = 1; rep <= config_.repetitions; ++rep) {
      for (const auto& asset : cell.workload->assets) {
        Record rec;
        rec.key = ExperimentKey{cell.key, asset.id, rep};
        rec.success = false;
        rec.error = error;
        rec.metrics = compute_app_metrics(rec.timing, config_.cost_rate_per_hour);
        results_.records.push_back(std::move(rec));
      }
    }
  }

  void summarize_cell(const CellKey& key, std::size_t first) {
    if (!on_cell) return;
    CellSummary s;
    s.key = key;
    double sum = 0;
    std::size_t ok = 0;
    for (std::size_t i = first; i < results_.records.size(); ++i) {
      const Record& r = results_.records[i];
      ++s.records;
      if (r.success) {
        sum += r.metrics.rtt;
        ++ok;
      } else {
        ++s.failures;
      }
    }
    s.mean_rtt = ok ? sum / static_cast<double>(ok) : 0.0;
    on_cell(s);
  }

  const RunConfig& config_;
  Testbed& testbed_;
  ResultSet& results_;
};

}  // namespace

ResultSet run_benchmark(const ValidatedRunConfig& validated, const RunOptions& options) {
  const RunConfig& config = validated.config();

  std::vector<NodeSpec> nodes = config.nodes;
  for (auto& n : nodes) {
    if (auto* vp = std::get_if<VirtualParams>(&n.backend)) vp->seed = node_seed(config.seed, n);
  }
  ResultStoreSpec store = config.result_store;
  store.link.seed = splitmix64(config.seed ^ store.link.seed);

  Testbed testbed(std::move(nodes), store,
                  options.registry ? *options.registry : TransportRegistry::global());
  ResultSet results(validated);
  results.seed = config.seed;

  const std::vector<Cell> cells = enumerate_cells(config);

  if (options.probe_platforms) {
    std::vector<std::string> used;
    for (const auto& n : config.nodes) {
      const bool in_use = std::any_of(cells.begin(), cells.end(), [&](const Cell& c) {
        const auto ids = cell_nodes(c.key);
        return std::find(ids.begin(), ids.end(), n.id) != ids.end();
      });
      if (in_use) used.push_back(n.id);
    }
    for (const auto& id : used) {
      try {
        results.platform[id] = testbed.probe_platform(id, config.probe);
      } catch (const Error& e) {
        PlatformMetrics m;
        m.missing.push_back(std::string("node: ") + e.what());
        results.platform[id] = std::move(m);
      }
    }
  }
  if (options.on_testbed) options.on_testbed(testbed);

  CellRunner runner(config, testbed, results);
  runner.on_cell = options.on_cell;
  for (const auto& cell : cells) runner.run(cell);
  return results;
}

}  // namespace fogbench
