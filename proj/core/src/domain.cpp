#include "fogbench/domain.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "fogbench/rng.hpp"
#include "fogbench/transport.hpp"

namespace fogbench {

namespace {

template <typename Enum, std::size_t N>
std::optional<Enum> lookup(std::string_view text, const std::pair<Enum, std::string_view> (&table)[N]) {
  for (const auto& [value, name] : table) {
    if (name == text) return value;
  }
  return std::nullopt;
}

template <typename Enum, std::size_t N>
std::string_view name_of(Enum value, const std::pair<Enum, std::string_view> (&table)[N]) {
  for (const auto& [v, name] : table) {
    if (v == value) return name;
  }
  return "?";
}

constexpr std::pair<DeploymentMode, std::string_view> kModeNames[] = {
    {DeploymentMode::CloudOnly, "cloud-only"},
    {DeploymentMode::EdgeOnly, "edge-only"},
    {DeploymentMode::CloudEdge, "cloud-edge"},
};

constexpr std::pair<Tier, std::string_view> kTierNames[] = {
    {Tier::Cloud, "cloud"},
    {Tier::Edge, "edge"},
};

constexpr std::pair<StressLevel, std::string_view> kStressNames[] = {
    {StressLevel::None, "none"},     {StressLevel::Minimal, "minimal"},
    {StressLevel::Low, "low"},       {StressLevel::Medium, "medium"},
    {StressLevel::High, "high"},     {StressLevel::VeryHigh, "very-high"},
};

constexpr std::pair<Profile, std::string_view> kProfileNames[] = {
    {Profile::YoloLike, "yolo-like"},       {Profile::SphinxLike, "sphinx-like"},
    {Profile::AeneasLike, "aeneas-like"},   {Profile::PokemonLike, "pokemon-like"},
    {Profile::FoglampLike, "foglamp-like"}, {Profile::RealfdLike, "realfd-like"},
    {Profile::Custom, "custom"},
};

}  // namespace

std::string_view to_string(DeploymentMode mode) { return name_of(mode, kModeNames); }
std::string_view to_string(Tier tier) { return name_of(tier, kTierNames); }
std::string_view to_string(StressLevel level) { return name_of(level, kStressNames); }
std::string_view to_string(Profile profile) { return name_of(profile, kProfileNames); }

std::optional<DeploymentMode> parse_mode(std::string_view text) { return lookup(text, kModeNames); }
std::optional<Tier> parse_tier(std::string_view text) { return lookup(text, kTierNames); }
std::optional<StressLevel> parse_stress_level(std::string_view text) {
  return lookup(text, kStressNames);
}
std::optional<Profile> parse_profile(std::string_view text) { return lookup(text, kProfileNames); }

std::string_view to_string(StressTarget target) {
  switch (target) {
    case StressTarget::Edge:
      return "edge";
    case StressTarget::Cloud:
      return "cloud";
    case StressTarget::All:
      return "all";
  }
  return "edge";
}

std::optional<StressTarget> parse_stress_target(std::string_view text) {
  if (text == "edge") return StressTarget::Edge;
  if (text == "cloud") return StressTarget::Cloud;
  if (text == "all") return StressTarget::All;
  return std::nullopt;
}

ValidationError::ValidationError(std::vector<Violation> violations)
    : Error([&] {
        std::ostringstream out;
        out << violations.size() << " configuration violation(s)";
        for (const auto& v : violations) {
          out << "\n  " << v.field;
          if (!v.entity.empty()) out << " [" << v.entity << "]";
          out << ": " << v.message;
        }
        return out.str();
      }()),
      violations_(std::move(violations)) {}

std::vector<std::uint8_t> materialize(const AssetSpec& asset) {
  if (const auto* generated = std::get_if<GeneratedContent>(&asset.content_source)) {
    std::vector<std::uint8_t> bytes(asset.payload_bytes);
    CounterRng rng(generated->seed);
    std::size_t i = 0;
    while (i < bytes.size()) {
      std::uint64_t word = rng.next();
      for (int b = 0; b < 8 && i < bytes.size(); ++b, ++i) {
        bytes[i] = static_cast<std::uint8_t>(word >> (8 * b));
      }
    }
    return bytes;
  }
  const auto& path = std::get<FileContent>(asset.content_source).path;
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read asset '" + asset.id + "' from " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (bytes.size() != asset.payload_bytes) {
    throw IoError("asset '" + asset.id + "' declares " + std::to_string(asset.payload_bytes) +
                  " bytes but " + path.string() + " holds " + std::to_string(bytes.size()));
  }
  return bytes;
}

const ServiceSpec* WorkloadSpec::find_service(std::string_view service) const {
  auto it = std::find_if(services.begin(), services.end(),
                         [&](const ServiceSpec& s) { return s.name == service; });
  return it == services.end() ? nullptr : &*it;
}

const std::string& ServicePlacement::node_for(std::string_view service) const {
  for (const auto& a : assignments) {
    if (a.service == service) return a.node;
  }
  throw std::out_of_range("service '" + std::string(service) + "' is not placed");
}

std::string ServicePlacement::label() const {
  std::string out;
  for (const auto& a : assignments) {
    if (!out.empty()) out += '+';
    out += a.service;
    out += '@';
    out += a.node;
  }
  if (offload_source) {
    out += "|offload@";
    out += *offload_source;
  }
  return out;
}

std::vector<ServicePlacement> placements_for_mode(const WorkloadSpec& workload, DeploymentMode mode,
                                                  const std::string& cloud_node,
                                                  const std::string& edge_node) {
  auto uniform = [&](const std::string& node) {
    ServicePlacement p;
    for (const auto& s : workload.services) p.assignments.push_back({s.name, node});
    return p;
  };

  switch (mode) {
    case DeploymentMode::CloudOnly:
      return {uniform(cloud_node)};
    case DeploymentMode::EdgeOnly:
      return {uniform(edge_node)};
    case DeploymentMode::CloudEdge: {
      std::vector<ServicePlacement> out;
      const std::size_t n = workload.services.size();
      for (std::size_t k = 1; k < n; ++k) {
        ServicePlacement p;
        for (std::size_t i = 0; i < n; ++i) {
          p.assignments.push_back({workload.services[i].name, i < k ? edge_node : cloud_node});
        }
        p.offload_source = cloud_node;
        out.push_back(std::move(p));
      }
      return out;
    }
  }
  return {};
}

ServicePlacement full_offload_placement(const WorkloadSpec& workload, const std::string& cloud_node,
                                        const std::string& edge_node) {
  ServicePlacement p;
  for (const auto& s : workload.services) p.assignments.push_back({s.name, edge_node});
  p.offload_source = cloud_node;
  return p;
}

const NodeSpec* RunConfig::find_node(std::string_view id) const {
  auto it = std::find_if(nodes.begin(), nodes.end(), [&](const NodeSpec& n) { return n.id == id; });
  return it == nodes.end() ? nullptr : &*it;
}

const WorkloadSpec* RunConfig::find_workload(std::string_view name) const {
  auto it = std::find_if(workloads.begin(), workloads.end(),
                         [&](const WorkloadSpec& w) { return w.name == name; });
  return it == workloads.end() ? nullptr : &*it;
}

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

namespace {

class Checker {
 public:
  void require(bool ok, std::string field, std::string entity, std::string message) {
    if (!ok) out_.push_back({std::move(field), std::move(entity), std::move(message)});
  }
  std::vector<Violation> take() { return std::move(out_); }

 private:
  std::vector<Violation> out_;
};

bool finite_positive(double v) { return std::isfinite(v) && v > 0.0; }
bool finite_nonneg(double v) { return std::isfinite(v) && v >= 0.0; }

void check_virtual(Checker& c, const VirtualParams& p, const std::string& field, const std::string& id) {
  c.require(finite_positive(p.compute_speed), field + ".compute_speed", id, "must be > 0");
  c.require(finite_positive(p.uplink_bandwidth), field + ".uplink_bandwidth", id, "must be > 0");
  c.require(finite_positive(p.downlink_bandwidth), field + ".downlink_bandwidth", id, "must be > 0");
  c.require(finite_nonneg(p.link_latency), field + ".link_latency", id, "must be >= 0");
  c.require(std::isfinite(p.jitter_fraction) && p.jitter_fraction >= 0.0 && p.jitter_fraction < 1.0,
            field + ".jitter_fraction", id, "must lie in [0, 1)");
  c.require(p.core_count >= 1, field + ".core_count", id, "must be >= 1");
  c.require(finite_nonneg(p.cpu_frequency), field + ".cpu_frequency", id, "must be >= 0");
  c.require(finite_nonneg(p.uptime), field + ".uptime", id, "must be >= 0");
  c.require(finite_positive(p.io_read_rate), field + ".io_read_rate", id, "must be > 0");
  c.require(finite_positive(p.io_write_rate), field + ".io_write_rate", id, "must be > 0");
  c.require(finite_nonneg(p.unzip_work_per_byte), field + ".unzip_work_per_byte", id, "must be >= 0");
  c.require(finite_nonneg(p.ram_stressor_penalty), field + ".ram_stressor_penalty", id,
            "must be >= 0");
}

void check_workload(Checker& c, const WorkloadSpec& w, const std::string& field) {
  c.require(!w.name.empty(), field + ".name", "", "must not be empty");
  c.require(!w.services.empty(), field + ".services", w.name, "must not be empty");
  c.require(!w.assets.empty(), field + ".assets", w.name, "must not be empty");

  std::set<std::string> service_names;
  for (std::size_t i = 0; i < w.services.size(); ++i) {
    const auto& s = w.services[i];
    const std::string sf = field + ".services[" + std::to_string(i) + "]";
    const std::string id = w.name + "/" + s.name;
    c.require(!s.name.empty(), sf + ".name", w.name, "must not be empty");
    c.require(service_names.insert(s.name).second, sf + ".name", id, "duplicate service name");
    c.require(finite_nonneg(s.work_per_byte), sf + ".work_per_byte", id, "must be >= 0");
    c.require(finite_nonneg(s.fixed_work), sf + ".fixed_work", id, "must be >= 0");
    c.require(finite_nonneg(s.output_ratio), sf + ".output_ratio", id, "must be >= 0");
    c.require(std::isfinite(s.filter_probability) && s.filter_probability >= 0.0 &&
                  s.filter_probability <= 1.0,
              sf + ".filter_probability", id, "must lie in [0, 1]");
  }

  std::set<std::string> asset_ids;
  for (std::size_t i = 0; i < w.assets.size(); ++i) {
    const auto& a = w.assets[i];
    const std::string af = field + ".assets[" + std::to_string(i) + "]";
    const std::string id = w.name + "/" + a.id;
    c.require(!a.id.empty(), af + ".id", w.name, "must not be empty");
    c.require(asset_ids.insert(a.id).second, af + ".id", id, "duplicate asset id");
    c.require(a.payload_bytes > 0, af + ".payload_bytes", id, "must be > 0");
    if (const auto* file = std::get_if<FileContent>(&a.content_source)) {
      std::error_code ec;
      const auto size = std::filesystem::file_size(file->path, ec);
      if (ec) {
        c.require(false, af + ".file", id, "cannot stat " + file->path.string());
      } else {
        c.require(size == a.payload_bytes, af + ".payload_bytes", id,
                  "file holds " + std::to_string(size) + " bytes");
      }
    }
  }

  if (w.profile == Profile::FoglampLike) {
    c.require(!w.requires_cloud_asset, field + ".requires_cloud_asset", w.name,
              "foglamp-like workloads never require a cloud asset");
  }
  if (w.profile == Profile::SphinxLike) {
    c.require(w.audio_length_seconds.has_value(), field + ".audio_length_seconds", w.name,
              "required for sphinx-like workloads");
  }
  if (w.audio_length_seconds) {
    c.require(finite_positive(*w.audio_length_seconds), field + ".audio_length_seconds", w.name,
              "must be > 0");
  }
}

void check_placement(Checker& c, const RunConfig& cfg, const NamedPlacement& np, const std::string& field) {
  const WorkloadSpec* w = cfg.find_workload(np.workload);
  if (!w) {
    c.require(false, field + ".workload", np.workload, "unknown workload");
    return;
  }
  const auto& p = np.placement;
  const std::string id = np.workload;

  std::vector<std::string> seen;
  for (const auto& a : p.assignments) seen.push_back(a.service);
  std::vector<std::string> expected;
  for (const auto& s : w->services) expected.push_back(s.name);
  c.require(seen == expected, field + ".services", id,
            "must place every service exactly once, in pipeline order");

  bool nodes_ok = true;
  std::size_t edge_prefix = 0;
  bool prefix_broken = false;
  for (const auto& a : p.assignments) {
    const NodeSpec* n = cfg.find_node(a.node);
    if (!n) {
      c.require(false, field + ".services." + a.service, a.node, "unknown node");
      nodes_ok = false;
      continue;
    }
    if (n->tier == Tier::Edge) {
      if (prefix_broken) {
        c.require(false, field + ".services." + a.service, id,
                  "cloud-edge placements must put an upstream prefix of services on the edge");
      } else {
        ++edge_prefix;
      }
    } else {
      prefix_broken = true;
    }
  }
  if (!nodes_ok) return;
  c.require(edge_prefix >= 1, field + ".services", id,
            "cloud-edge placements need at least the first service on an edge node");

  std::optional<std::string> source = p.offload_source;
  if (!source) {
    for (const auto& a : p.assignments) {
      if (cfg.find_node(a.node)->tier == Tier::Cloud) {
        source = a.node;
        break;
      }
    }
  }
  if (!source) {
    c.require(false, field + ".offload_source", id,
              "required when every service is placed on the edge");
  } else {
    const NodeSpec* n = cfg.find_node(*source);
    c.require(n != nullptr && n->tier == Tier::Cloud, field + ".offload_source", *source,
              "must name a cloud node");
  }
}

}  // namespace

std::vector<Violation> collect_violations(const RunConfig& cfg) {
  Checker c;

  std::set<std::string> node_ids;
  std::size_t cloud_nodes = 0;
  std::size_t edge_nodes = 0;
  for (std::size_t i = 0; i < cfg.nodes.size(); ++i) {
    const auto& n = cfg.nodes[i];
    const std::string field = "nodes[" + std::to_string(i) + "]";
    c.require(!n.id.empty(), field + ".id", "", "must not be empty");
    c.require(node_ids.insert(n.id).second, field + ".id", n.id, "duplicate node id");
    (n.tier == Tier::Cloud ? cloud_nodes : edge_nodes)++;
    if (n.is_virtual()) {
      check_virtual(c, n.virtual_params(), field + ".virtual", n.id);
    } else {
      const auto& t = n.transport_params();
      c.require(TransportRegistry::global().contains(t.adapter), field + ".external.adapter", n.id,
                "unknown transport adapter '" + t.adapter + "'");
      c.require(!t.work_command.empty(), field + ".external.work_command", n.id, "must not be empty");
      c.require(finite_nonneg(t.work_scale), field + ".external.work_scale", n.id, "must be >= 0");
      if (t.core_count) c.require(*t.core_count >= 1, field + ".external.core_count", n.id, "must be >= 1");
    }
  }

  c.require(!cfg.workloads.empty(), "workloads", "", "must not be empty");
  std::set<std::string> workload_names;
  for (std::size_t i = 0; i < cfg.workloads.size(); ++i) {
    const auto& w = cfg.workloads[i];
    const std::string field = "workloads[" + std::to_string(i) + "]";
    c.require(workload_names.insert(w.name).second, field + ".name", w.name, "duplicate workload name");
    check_workload(c, w, field);
  }

  c.require(!cfg.modes.empty(), "modes", "", "must not be empty");
  std::set<DeploymentMode> modes;
  for (auto m : cfg.modes) {
    c.require(modes.insert(m).second, "modes", std::string(to_string(m)), "duplicate mode");
  }
  if (modes.contains(DeploymentMode::CloudOnly)) {
    c.require(cloud_nodes >= 1, "modes", "cloud-only", "CloudOnly requires at least one cloud node");
  }
  if (modes.contains(DeploymentMode::EdgeOnly)) {
    c.require(edge_nodes >= 1, "modes", "edge-only", "EdgeOnly requires at least one edge node");
  }
  if (modes.contains(DeploymentMode::CloudEdge)) {
    c.require(cloud_nodes >= 1, "modes", "cloud-edge", "CloudEdge requires at least one cloud node");
    c.require(edge_nodes >= 1, "modes", "cloud-edge", "CloudEdge requires at least one edge node");
    for (const auto& w : cfg.workloads) {
      c.require(w.requires_cloud_asset, "modes", w.name,
                "workload '" + w.name +
                    "' has no cloud asset and never runs in CloudEdge mode (remove it or the mode)");
    }
  }

  for (std::size_t i = 0; i < cfg.placements.size(); ++i) {
    const std::string field = "placements[" + std::to_string(i) + "]";
    c.require(modes.contains(DeploymentMode::CloudEdge), field, cfg.placements[i].workload,
              "explicit placements apply to CloudEdge mode, which is not selected");
    check_placement(c, cfg, cfg.placements[i], field);
  }

  c.require(cfg.repetitions >= 1, "repetitions", "", "must be >= 1");
  c.require(!cfg.stress_levels.empty(), "stress_levels", "", "must not be empty");
  c.require(!cfg.user_counts.empty(), "user_counts", "", "must not be empty");
  for (int u : cfg.user_counts) {
    c.require(u >= 1, "user_counts", std::to_string(u), "entries must be >= 1");
  }
  c.require(finite_nonneg(cfg.cost_rate_per_hour), "cost_rate_per_hour", "", "must be >= 0");
  c.require(cfg.load.requests_per_user >= 1, "load.requests_per_user", "", "must be >= 1");
  if (cfg.load.duration_seconds) {
    c.require(finite_positive(*cfg.load.duration_seconds), "load.duration_seconds", "", "must be > 0");
  }
  c.require(finite_nonneg(cfg.load.think_time), "load.think_time", "", "must be >= 0");
  c.require(cfg.probe.archive_bytes > 0, "probe.archive_bytes", "", "must be > 0");
  c.require(cfg.probe.download_bytes > 0, "probe.download_bytes", "", "must be > 0");
  c.require(cfg.probe.io_bytes > 0, "probe.io_bytes", "", "must be > 0");

  switch (cfg.result_store.kind) {
    case ResultStoreSpec::Kind::Virtual:
      check_virtual(c, cfg.result_store.link, "result_store.virtual", "result-store");
      break;
    case ResultStoreSpec::Kind::Directory:
      c.require(!cfg.result_store.directory.empty(), "result_store.directory", "", "must not be empty");
      break;
    case ResultStoreSpec::Kind::None:
      break;
  }

  return c.take();
}

ValidatedRunConfig validate_run_config(RunConfig config) {
  auto violations = collect_violations(config);
  if (!violations.empty()) throw ValidationError(std::move(violations));
  return ValidatedRunConfig(std::move(config));
}

}  // namespace fogbench
