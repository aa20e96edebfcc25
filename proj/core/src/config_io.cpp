#include "fogbench/config_io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>

#include "fogbench/rng.hpp"
#include "fogbench/testbed_presets.hpp"

namespace fogbench {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

// ---------------------------------------------------------------------------
// Reading helpers; every error names the JSON path.
// ---------------------------------------------------------------------------

void expect_object(const json& j, const std::string& path, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw ConfigError(path + ": expected an object");
  for (const auto& [key, _] : j.items()) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; })) {
      throw ConfigError(path + ": unknown key '" + key + "'");
    }
  }
}

const json& array_at(const json& j, const char* key, const std::string& path) {
  const json& a = j.at(key);
  if (!a.is_array()) throw ConfigError(path + "." + key + ": expected an array");
  return a;
}

std::string sub(const std::string& path, const char* key) { return path + "." + key; }
std::string sub(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

double as_double(const json& j, const std::string& path) {
  if (!j.is_number()) throw ConfigError(path + ": expected a number");
  return j.get<double>();
}

std::uint64_t as_u64(const json& j, const std::string& path) {
  if (!j.is_number_unsigned()) throw ConfigError(path + ": expected a non-negative integer");
  return j.get<std::uint64_t>();
}

int as_int(const json& j, const std::string& path) {
  if (!j.is_number_integer()) throw ConfigError(path + ": expected an integer");
  return j.get<int>();
}

bool as_bool(const json& j, const std::string& path) {
  if (!j.is_boolean()) throw ConfigError(path + ": expected true or false");
  return j.get<bool>();
}

std::string as_string(const json& j, const std::string& path) {
  if (!j.is_string()) throw ConfigError(path + ": expected a string");
  return j.get<std::string>();
}

std::vector<std::string> as_strings(const json& j, const std::string& path) {
  if (!j.is_array()) throw ConfigError(path + ": expected an array of strings");
  std::vector<std::string> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(as_string(j[i], sub(path, i)));
  return out;
}

std::map<std::string, std::string> as_labels(const json& j, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path + ": expected an object of strings");
  std::map<std::string, std::string> out;
  for (const auto& [k, v] : j.items()) out[k] = as_string(v, path + "." + k);
  return out;
}

template <typename T, typename Fn>
void read(const json& j, const char* key, const std::string& path, T& target, Fn convert) {
  if (j.contains(key)) target = convert(j.at(key), sub(path, key));
}

template <typename E, typename Parse>
E as_enum(const json& j, const std::string& path, Parse parse, const char* what) {
  const std::string text = as_string(j, path);
  auto v = parse(text);
  if (!v) throw ConfigError(path + ": unknown " + std::string(what) + " '" + text + "'");
  return *v;
}

// ---------------------------------------------------------------------------

VirtualParams parse_virtual(const json& j, const std::string& path, VirtualParams p = {}) {
  expect_object(j, path,
                {"compute_speed", "uplink_bandwidth", "downlink_bandwidth", "link_latency", "jitter_fraction",
                 "seed", "core_count", "cpu_model", "cpu_frequency", "uptime", "io_read_rate", "io_write_rate",
                 "unzip_work_per_byte", "ram_stressor_penalty"});
  read(j, "compute_speed", path, p.compute_speed, as_double);
  read(j, "uplink_bandwidth", path, p.uplink_bandwidth, as_double);
  read(j, "downlink_bandwidth", path, p.downlink_bandwidth, as_double);
  read(j, "link_latency", path, p.link_latency, as_double);
  read(j, "jitter_fraction", path, p.jitter_fraction, as_double);
  read(j, "seed", path, p.seed, as_u64);
  read(j, "core_count", path, p.core_count, as_int);
  read(j, "cpu_model", path, p.cpu_model, as_string);
  read(j, "cpu_frequency", path, p.cpu_frequency, as_double);
  read(j, "uptime", path, p.uptime, as_double);
  read(j, "io_read_rate", path, p.io_read_rate, as_double);
  read(j, "io_write_rate", path, p.io_write_rate, as_double);
  read(j, "unzip_work_per_byte", path, p.unzip_work_per_byte, as_double);
  read(j, "ram_stressor_penalty", path, p.ram_stressor_penalty, as_double);
  return p;
}

TransportParams parse_transport(const json& j, const std::string& path) {
  expect_object(j, path,
                {"adapter", "address", "remote_dir", "provision_command", "work_command", "work_scale",
                 "core_count"});
  TransportParams p;
  read(j, "adapter", path, p.adapter, as_string);
  read(j, "address", path, p.address, as_string);
  read(j, "remote_dir", path, p.remote_dir, as_string);
  read(j, "provision_command", path, p.provision_command, as_strings);
  read(j, "work_command", path, p.work_command, as_strings);
  read(j, "work_scale", path, p.work_scale, as_double);
  if (j.contains("core_count")) p.core_count = as_int(j["core_count"], sub(path, "core_count"));
  return p;
}

NodeSpec parse_node(const json& j, const std::string& path) {
  expect_object(j, path, {"id", "tier", "virtual", "transport", "labels"});
  NodeSpec n;
  if (!j.contains("id")) throw ConfigError(path + ": 'id' is required");
  n.id = as_string(j["id"], sub(path, "id"));
  if (!j.contains("tier")) throw ConfigError(path + ": 'tier' is required");
  n.tier = as_enum<Tier>(j["tier"], sub(path, "tier"), parse_tier, "tier");
  if (j.contains("virtual") && j.contains("transport")) {
    throw ConfigError(path + ": give either 'virtual' or 'transport', not both");
  }
  if (j.contains("transport")) {
    n.backend = parse_transport(j["transport"], sub(path, "transport"));
  } else {
    n.backend = j.contains("virtual") ? parse_virtual(j["virtual"], sub(path, "virtual")) : VirtualParams{};
  }
  read(j, "labels", path, n.labels, as_labels);
  return n;
}

AssetSpec parse_asset(const json& j, const std::string& path, const fs::path& base_dir,
                      const std::string& workload) {
  expect_object(j, path, {"id", "payload_bytes", "seed", "file"});
  AssetSpec a;
  if (!j.contains("id")) throw ConfigError(path + ": 'id' is required");
  a.id = as_string(j["id"], sub(path, "id"));
  read(j, "payload_bytes", path, a.payload_bytes, as_u64);
  if (j.contains("file")) {
    if (j.contains("seed")) throw ConfigError(path + ": give either 'seed' or 'file', not both");
    fs::path file = as_string(j["file"], sub(path, "file"));
    if (file.is_relative() && !base_dir.empty()) file = base_dir / file;
    a.content_source = FileContent{file};
  } else {
    std::uint64_t seed = fnv1a64(workload + "/" + a.id);
    read(j, "seed", path, seed, as_u64);
    a.content_source = GeneratedContent{seed};
  }
  return a;
}

ServiceSpec parse_service(const json& j, const std::string& path) {
  expect_object(j, path,
                {"name", "work_per_byte", "fixed_work", "output_ratio", "filter_probability",
                 "offload_payload_bytes", "command"});
  ServiceSpec s;
  if (!j.contains("name")) throw ConfigError(path + ": 'name' is required");
  s.name = as_string(j["name"], sub(path, "name"));
  read(j, "work_per_byte", path, s.work_per_byte, as_double);
  read(j, "fixed_work", path, s.fixed_work, as_double);
  read(j, "output_ratio", path, s.output_ratio, as_double);
  read(j, "filter_probability", path, s.filter_probability, as_double);
  read(j, "offload_payload_bytes", path, s.offload_payload_bytes, as_u64);
  read(j, "command", path, s.command, as_strings);
  return s;
}

ServiceOverride parse_override(const json& j, const std::string& path) {
  expect_object(j, path,
                {"work_per_byte", "fixed_work", "output_ratio", "filter_probability", "offload_payload_bytes",
                 "command"});
  ServiceOverride o;
  if (j.contains("work_per_byte")) o.work_per_byte = as_double(j["work_per_byte"], sub(path, "work_per_byte"));
  if (j.contains("fixed_work")) o.fixed_work = as_double(j["fixed_work"], sub(path, "fixed_work"));
  if (j.contains("output_ratio")) o.output_ratio = as_double(j["output_ratio"], sub(path, "output_ratio"));
  if (j.contains("filter_probability")) {
    o.filter_probability = as_double(j["filter_probability"], sub(path, "filter_probability"));
  }
  if (j.contains("offload_payload_bytes")) {
    o.offload_payload_bytes = as_u64(j["offload_payload_bytes"], sub(path, "offload_payload_bytes"));
  }
  if (j.contains("command")) o.command = as_strings(j["command"], sub(path, "command"));
  return o;
}

WorkloadSpec parse_workload(const json& j, const std::string& path, const fs::path& base_dir,
                            const WorkloadRegistry& registry) {
  if (!j.is_object()) throw ConfigError(path + ": expected an object");

  if (j.contains("services")) {
    expect_object(j, path,
                  {"name", "profile", "services", "assets", "requires_cloud_asset", "audio_length_seconds",
                   "labels"});
    WorkloadSpec w;
    if (!j.contains("name")) throw ConfigError(path + ": 'name' is required");
    w.name = as_string(j["name"], sub(path, "name"));
    if (j.contains("profile")) w.profile = as_enum<Profile>(j["profile"], sub(path, "profile"), parse_profile, "profile");
    const json& services = array_at(j, "services", path);
    for (std::size_t i = 0; i < services.size(); ++i) {
      w.services.push_back(parse_service(services[i], sub(sub(path, "services"), i)));
    }
    if (!j.contains("assets")) throw ConfigError(path + ": 'assets' is required with 'services'");
    const json& assets = array_at(j, "assets", path);
    for (std::size_t i = 0; i < assets.size(); ++i) {
      w.assets.push_back(parse_asset(assets[i], sub(sub(path, "assets"), i), base_dir, w.name));
    }
    read(j, "requires_cloud_asset", path, w.requires_cloud_asset, as_bool);
    if (j.contains("audio_length_seconds")) {
      w.audio_length_seconds = as_double(j["audio_length_seconds"], sub(path, "audio_length_seconds"));
    }
    read(j, "labels", path, w.labels, as_labels);
    return w;
  }

  expect_object(j, path,
                {"name", "profile", "service_overrides", "asset_count", "asset_bytes", "assets",
                 "audio_length_seconds"});
  if (!j.contains("profile")) throw ConfigError(path + ": needs 'profile' or 'services'");
  const std::string profile_name = as_string(j["profile"], sub(path, "profile"));
  std::optional<std::string> name;
  if (j.contains("name")) name = as_string(j["name"], sub(path, "name"));
  const std::string effective = name.value_or(profile_name);

  std::optional<std::vector<AssetSpec>> assets;
  if (j.contains("assets")) {
    const json& a = array_at(j, "assets", path);
    assets.emplace();
    for (std::size_t i = 0; i < a.size(); ++i) {
      assets->push_back(parse_asset(a[i], sub(sub(path, "assets"), i), base_dir, effective));
    }
  }

  auto profile = parse_profile(profile_name);
  if (!profile || *profile == Profile::Custom) {
    // A registered plugin.
    if (!registry.contains(profile_name)) {
      throw ConfigError(sub(path, "profile") + ": unknown profile or plugin '" + profile_name + "'");
    }
    for (const char* key : {"service_overrides", "asset_count", "asset_bytes", "audio_length_seconds"}) {
      if (j.contains(key)) throw ConfigError(path + ": '" + key + "' applies to built-in profiles only");
    }
    WorkloadSpec w = registry.get(profile_name);
    w.name = effective;
    if (assets) w.assets = *assets;
    return w;
  }

  ProfileOverrides o;
  o.name = name;
  o.assets = std::move(assets);
  if (j.contains("service_overrides")) {
    const json& so = j["service_overrides"];
    if (!so.is_object()) throw ConfigError(sub(path, "service_overrides") + ": expected an object");
    for (const auto& [svc, body] : so.items()) {
      o.services[svc] = parse_override(body, sub(path, "service_overrides") + "." + svc);
    }
  }
  if (j.contains("asset_count")) o.asset_count = as_int(j["asset_count"], sub(path, "asset_count"));
  if (j.contains("asset_bytes")) o.asset_bytes = as_u64(j["asset_bytes"], sub(path, "asset_bytes"));
  if (j.contains("audio_length_seconds")) {
    o.audio_length_seconds = as_double(j["audio_length_seconds"], sub(path, "audio_length_seconds"));
  }
  try {
    return make_profile(*profile, o);
  } catch (const InvalidDescriptor& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

NamedPlacement parse_placement(const json& j, const std::string& path) {
  expect_object(j, path, {"workload", "assignments", "offload_source"});
  NamedPlacement np;
  if (!j.contains("workload")) throw ConfigError(path + ": 'workload' is required");
  np.workload = as_string(j["workload"], sub(path, "workload"));
  if (!j.contains("assignments")) throw ConfigError(path + ": 'assignments' is required");
  const json& a = array_at(j, "assignments", path);
  for (std::size_t i = 0; i < a.size(); ++i) {
    const std::string p = sub(sub(path, "assignments"), i);
    expect_object(a[i], p, {"service", "node"});
    if (!a[i].contains("service") || !a[i].contains("node")) {
      throw ConfigError(p + ": 'service' and 'node' are required");
    }
    np.placement.assignments.push_back({as_string(a[i]["service"], sub(p, "service")),
                                        as_string(a[i]["node"], sub(p, "node"))});
  }
  if (j.contains("offload_source")) {
    np.placement.offload_source = as_string(j["offload_source"], sub(path, "offload_source"));
  }
  return np;
}

ResultStoreSpec parse_result_store(const json& j, const std::string& path, const fs::path& base_dir) {
  expect_object(j, path, {"kind", "link", "directory"});
  ResultStoreSpec s;
  const std::string kind = j.contains("kind") ? as_string(j["kind"], sub(path, "kind")) : "virtual";
  if (kind == "virtual") {
    s.kind = ResultStoreSpec::Kind::Virtual;
    if (j.contains("link")) s.link = parse_virtual(j["link"], sub(path, "link"), s.link);
  } else if (kind == "directory") {
    s.kind = ResultStoreSpec::Kind::Directory;
    if (j.contains("directory")) {
      s.directory = as_string(j["directory"], sub(path, "directory"));
      if (s.directory.is_relative() && !base_dir.empty()) s.directory = base_dir / s.directory;
    }
  } else if (kind == "none") {
    s.kind = ResultStoreSpec::Kind::None;
  } else {
    throw ConfigError(sub(path, "kind") + ": expected virtual, directory or none");
  }
  return s;
}

// ---------------------------------------------------------------------------
// Writing
// ---------------------------------------------------------------------------

json virtual_json(const VirtualParams& p) {
  return {{"compute_speed", p.compute_speed},
          {"uplink_bandwidth", p.uplink_bandwidth},
          {"downlink_bandwidth", p.downlink_bandwidth},
          {"link_latency", p.link_latency},
          {"jitter_fraction", p.jitter_fraction},
          {"seed", p.seed},
          {"core_count", p.core_count},
          {"cpu_model", p.cpu_model},
          {"cpu_frequency", p.cpu_frequency},
          {"uptime", p.uptime},
          {"io_read_rate", p.io_read_rate},
          {"io_write_rate", p.io_write_rate},
          {"unzip_work_per_byte", p.unzip_work_per_byte},
          {"ram_stressor_penalty", p.ram_stressor_penalty}};
}

json asset_json(const AssetSpec& a) {
  json j{{"id", a.id}, {"payload_bytes", a.payload_bytes}};
  if (const auto* g = std::get_if<GeneratedContent>(&a.content_source)) {
    j["seed"] = g->seed;
  } else {
    j["file"] = std::get<FileContent>(a.content_source).path.string();
  }
  return j;
}

}  // namespace

RunConfig parse_run_config(const json& doc, const fs::path& base_dir, WorkloadRegistry& registry) {
  const std::string root = "config";
  expect_object(doc, root,
                {"testbed", "nodes", "workloads", "modes", "placements", "repetitions", "stress_levels",
                 "user_counts", "result_store", "cost_rate_per_hour", "output_dir", "seed", "load", "probe",
                 "stress_target", "plugins"});
  RunConfig c;

  if (doc.contains("plugins")) {
    for (const auto& p : as_strings(doc["plugins"], sub(root, "plugins"))) {
      fs::path file = p;
      if (file.is_relative() && !base_dir.empty()) file = base_dir / file;
      try {
        registry.register_plugin(load_plugin_descriptor(file));
      } catch (const DuplicateName&) {
        // Already registered by an earlier config or the command line.
      }
    }
  }

  if (doc.contains("testbed")) {
    const std::string preset = as_string(doc["testbed"], sub(root, "testbed"));
    if (preset != "default-virtual") throw ConfigError("config.testbed: unknown preset '" + preset + "'");
    c.nodes = default_virtual_testbed();
  }
  if (doc.contains("nodes")) {
    const json& nodes = array_at(doc, "nodes", root);
    for (std::size_t i = 0; i < nodes.size(); ++i) c.nodes.push_back(parse_node(nodes[i], sub(sub(root, "nodes"), i)));
  }
  if (doc.contains("workloads")) {
    const json& ws = array_at(doc, "workloads", root);
    for (std::size_t i = 0; i < ws.size(); ++i) {
      c.workloads.push_back(parse_workload(ws[i], sub(sub(root, "workloads"), i), base_dir, registry));
    }
  }
  if (doc.contains("modes")) {
    const json& ms = array_at(doc, "modes", root);
    for (std::size_t i = 0; i < ms.size(); ++i) {
      c.modes.push_back(as_enum<DeploymentMode>(ms[i], sub(sub(root, "modes"), i), parse_mode, "mode"));
    }
  }
  if (doc.contains("placements")) {
    const json& ps = array_at(doc, "placements", root);
    for (std::size_t i = 0; i < ps.size(); ++i) {
      c.placements.push_back(parse_placement(ps[i], sub(sub(root, "placements"), i)));
    }
  }
  read(doc, "repetitions", root, c.repetitions, as_int);
  if (doc.contains("stress_levels")) {
    const json& ss = array_at(doc, "stress_levels", root);
    c.stress_levels.clear();
    for (std::size_t i = 0; i < ss.size(); ++i) {
      c.stress_levels.push_back(
          as_enum<StressLevel>(ss[i], sub(sub(root, "stress_levels"), i), parse_stress_level, "stress level"));
    }
  }
  if (doc.contains("user_counts")) {
    const json& us = array_at(doc, "user_counts", root);
    c.user_counts.clear();
    for (std::size_t i = 0; i < us.size(); ++i) c.user_counts.push_back(as_int(us[i], sub(sub(root, "user_counts"), i)));
  }
  if (doc.contains("result_store")) c.result_store = parse_result_store(doc["result_store"], sub(root, "result_store"), base_dir);
  read(doc, "cost_rate_per_hour", root, c.cost_rate_per_hour, as_double);
  if (doc.contains("output_dir")) c.output_dir = as_string(doc["output_dir"], sub(root, "output_dir"));
  read(doc, "seed", root, c.seed, as_u64);
  if (doc.contains("load")) {
    const json& l = doc["load"];
    const std::string p = sub(root, "load");
    expect_object(l, p, {"requests_per_user", "duration_seconds", "think_time"});
    read(l, "requests_per_user", p, c.load.requests_per_user, as_int);
    if (l.contains("duration_seconds")) c.load.duration_seconds = as_double(l["duration_seconds"], sub(p, "duration_seconds"));
    read(l, "think_time", p, c.load.think_time, as_double);
  }
  if (doc.contains("probe")) {
    const json& pr = doc["probe"];
    const std::string p = sub(root, "probe");
    expect_object(pr, p, {"archive_bytes", "download_bytes", "io_bytes"});
    read(pr, "archive_bytes", p, c.probe.archive_bytes, as_u64);
    read(pr, "download_bytes", p, c.probe.download_bytes, as_u64);
    read(pr, "io_bytes", p, c.probe.io_bytes, as_u64);
  }
  if (doc.contains("stress_target")) {
    c.stress_target = as_enum<StressTarget>(doc["stress_target"], sub(root, "stress_target"), parse_stress_target,
                                            "stress target");
  }
  return c;
}

RunConfig load_run_config(const fs::path& path, WorkloadRegistry& registry) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return parse_run_config(doc, path.parent_path(), registry);
}

json to_json(const RunConfig& c) {
  json j;
  j["nodes"] = json::array();
  for (const auto& n : c.nodes) {
    json node{{"id", n.id}, {"tier", to_string(n.tier)}};
    if (n.is_virtual()) {
      node["virtual"] = virtual_json(n.virtual_params());
    } else {
      const auto& t = n.transport_params();
      node["transport"] = {{"adapter", t.adapter},
                           {"address", t.address},
                           {"remote_dir", t.remote_dir},
                           {"provision_command", t.provision_command},
                           {"work_command", t.work_command},
                           {"work_scale", t.work_scale}};
      if (t.core_count) node["transport"]["core_count"] = *t.core_count;
    }
    if (!n.labels.empty()) node["labels"] = n.labels;
    j["nodes"].push_back(std::move(node));
  }
  j["workloads"] = json::array();
  for (const auto& w : c.workloads) {
    json wj{{"name", w.name}, {"profile", to_string(w.profile)}, {"requires_cloud_asset", w.requires_cloud_asset}};
    wj["services"] = json::array();
    for (const auto& s : w.services) {
      json sj{{"name", s.name},
              {"work_per_byte", s.work_per_byte},
              {"fixed_work", s.fixed_work},
              {"output_ratio", s.output_ratio},
              {"filter_probability", s.filter_probability},
              {"offload_payload_bytes", s.offload_payload_bytes}};
      if (!s.command.empty()) sj["command"] = s.command;
      wj["services"].push_back(std::move(sj));
    }
    wj["assets"] = json::array();
    for (const auto& a : w.assets) wj["assets"].push_back(asset_json(a));
    if (w.audio_length_seconds) wj["audio_length_seconds"] = *w.audio_length_seconds;
    if (!w.labels.empty()) wj["labels"] = w.labels;
    j["workloads"].push_back(std::move(wj));
  }
  j["modes"] = json::array();
  for (auto m : c.modes) j["modes"].push_back(to_string(m));
  if (!c.placements.empty()) {
    j["placements"] = json::array();
    for (const auto& np : c.placements) {
      json pj{{"workload", np.workload}, {"assignments", json::array()}};
      for (const auto& a : np.placement.assignments) pj["assignments"].push_back({{"service", a.service}, {"node", a.node}});
      if (np.placement.offload_source) pj["offload_source"] = *np.placement.offload_source;
      j["placements"].push_back(std::move(pj));
    }
  }
  j["repetitions"] = c.repetitions;
  j["stress_levels"] = json::array();
  for (auto s : c.stress_levels) j["stress_levels"].push_back(to_string(s));
  j["user_counts"] = c.user_counts;
  switch (c.result_store.kind) {
    case ResultStoreSpec::Kind::Virtual:
      j["result_store"] = {{"kind", "virtual"}, {"link", virtual_json(c.result_store.link)}};
      break;
    case ResultStoreSpec::Kind::Directory:
      j["result_store"] = {{"kind", "directory"}, {"directory", c.result_store.directory.string()}};
      break;
    case ResultStoreSpec::Kind::None:
      j["result_store"] = {{"kind", "none"}};
      break;
  }
  j["cost_rate_per_hour"] = c.cost_rate_per_hour;
  j["output_dir"] = c.output_dir.string();
  j["seed"] = c.seed;
  j["load"] = {{"requests_per_user", c.load.requests_per_user}, {"think_time", c.load.think_time}};
  if (c.load.duration_seconds) j["load"]["duration_seconds"] = *c.load.duration_seconds;
  j["probe"] = {{"archive_bytes", c.probe.archive_bytes},
                {"download_bytes", c.probe.download_bytes},
                {"io_bytes", c.probe.io_bytes}};
  j["stress_target"] = to_string(c.stress_target);
  return j;
}

std::string config_hash(const RunConfig& config) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a64([&] {
                  json j = to_json(config);
                  j.erase("output_dir");  // where results go is not part of the experiment
                  return j.dump();
                }())));
  return buf;
}

}  // namespace fogbench
