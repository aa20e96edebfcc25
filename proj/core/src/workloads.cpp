#include "fogbench/workloads.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

#include "fogbench/rng.hpp"

namespace fogbench {

using nlohmann::json;

namespace {

ServiceSpec service(std::string name, double work_per_byte, double fixed_work, double output_ratio,
                    std::uint64_t offload, double filter = 1.0) {
  ServiceSpec s;
  s.name = std::move(name);
  s.work_per_byte = work_per_byte;
  s.fixed_work = fixed_work;
  s.output_ratio = output_ratio;
  s.filter_probability = filter;
  s.offload_payload_bytes = offload;
  return s;
}

struct Shape {
  std::vector<ServiceSpec> services;
  std::string asset_prefix;
  std::uint64_t asset_bytes = 0;
  bool requires_cloud_asset = true;
  std::optional<double> audio_length;
  std::string type;
};

Shape builtin_shape(Profile profile) {
  switch (profile) {
    case Profile::YoloLike:
      return {{service("resize", 50, 0, 0.25, 0), service("detect", 1000, 4e8, 0.01, 34'000'000)},
              "image", 200'000, true, std::nullopt, "BI,CI"};
    case Profile::SphinxLike:
      return {{service("recognize", 2500, 0, 0.001, 20'000'000)}, "audio", 320'000, true, 10.0, "BI,CI"};
    case Profile::AeneasLike:
      return {{service("align", 20, 0, 0.05, 8'000)}, "audio", 400'000, true, std::nullopt, "BI"};
    case Profile::PokemonLike:
      return {{service("game", 0, 2e7, 1.0, 512'000)}, "request", 2'000, true, std::nullopt, "LC,LA"};
    case Profile::FoglampLike:
      return {{service("gateway", 0, 1e6, 1.0, 0)}, "reading", 512, false, std::nullopt, "LC"};
    case Profile::RealfdLike:
      return {{service("GSC", 5, 0, 2.0 / 3.0, 16'000), service("MD", 10, 0, 1.0, 32'000, 0.6),
               service("FD", 500, 0, 0.001, 930'000)},
              "frame", 900'000, true, std::nullopt, "LC,BI,CI"};
    case Profile::Custom:
      break;
  }
  throw InvalidDescriptor("the custom profile has no built-in shape");
}

std::vector<AssetSpec> generated_assets(const std::string& workload, const std::string& prefix, int count,
                                        std::uint64_t bytes) {
  std::vector<AssetSpec> out;
  for (int i = 1; i <= count; ++i) {
    const std::string id = prefix + "-" + std::to_string(i);
    out.push_back({id, bytes, GeneratedContent{fnv1a64(workload + "/" + id)}});
  }
  return out;
}

// JSON helpers for descriptors -------------------------------------------------

void reject_unknown(const json& obj, std::initializer_list<const char*> allowed, const std::string& where) {
  for (const auto& [key, _] : obj.items()) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; })) {
      throw InvalidDescriptor(where + ": unknown key '" + key + "'");
    }
  }
}

template <typename T>
T field(const json& obj, const char* key, const std::string& where, T fallback) {
  if (!obj.contains(key)) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw InvalidDescriptor(where + "." + key + ": wrong type");
  }
}

}  // namespace

WorkloadSpec make_profile(Profile profile, const ProfileOverrides& overrides) {
  Shape shape = builtin_shape(profile);
  WorkloadSpec w;
  w.name = overrides.name.value_or(std::string(to_string(profile)));
  w.profile = profile;
  w.requires_cloud_asset = shape.requires_cloud_asset;
  w.audio_length_seconds = overrides.audio_length_seconds ? overrides.audio_length_seconds : shape.audio_length;
  w.labels["type"] = shape.type;

  for (const auto& [name, o] : overrides.services) {
    auto it = std::find_if(shape.services.begin(), shape.services.end(),
                           [&](const ServiceSpec& s) { return s.name == name; });
    if (it == shape.services.end()) {
      throw InvalidDescriptor("profile " + std::string(to_string(profile)) + " has no service '" + name + "'");
    }
    if (o.work_per_byte) it->work_per_byte = *o.work_per_byte;
    if (o.fixed_work) it->fixed_work = *o.fixed_work;
    if (o.output_ratio) it->output_ratio = *o.output_ratio;
    if (o.filter_probability) it->filter_probability = *o.filter_probability;
    if (o.offload_payload_bytes) it->offload_payload_bytes = *o.offload_payload_bytes;
    if (o.command) it->command = *o.command;
  }
  w.services = std::move(shape.services);

  if (overrides.assets) {
    w.assets = *overrides.assets;
  } else {
    w.assets = generated_assets(w.name, shape.asset_prefix, overrides.asset_count.value_or(1),
                                overrides.asset_bytes.value_or(shape.asset_bytes));
  }
  return w;
}

// ---------------------------------------------------------------------------
// Plugins
// ---------------------------------------------------------------------------

WorkloadSpec PluginDescriptor::to_workload() const {
  WorkloadSpec w;
  w.name = name;
  w.profile = Profile::Custom;
  w.services = services;
  w.assets = payloads;
  w.requires_cloud_asset = requires_cloud_asset;
  w.labels = labels;
  w.labels["plugin"] = name;
  return w;
}

PluginDescriptor parse_plugin_descriptor(const json& doc, const std::filesystem::path& base_dir) {
  if (!doc.is_object()) throw InvalidDescriptor("plugin descriptor must be an object");
  reject_unknown(doc, {"name", "services", "payloads", "offload_asset", "requires_cloud_asset", "labels"},
                 "plugin");
  PluginDescriptor d;
  d.name = field<std::string>(doc, "name", "plugin", "");
  if (d.name.empty()) throw InvalidDescriptor("plugin: 'name' is required");
  const std::string where = "plugin '" + d.name + "'";
  d.requires_cloud_asset = field<bool>(doc, "requires_cloud_asset", where, true);
  d.labels = field<std::map<std::string, std::string>>(doc, "labels", where, {});

  if (!doc.contains("services") || !doc["services"].is_array() || doc["services"].empty()) {
    throw InvalidDescriptor(where + ": 'services' must be a non-empty array");
  }
  for (const auto& s : doc["services"]) {
    if (!s.is_object()) throw InvalidDescriptor(where + ": services must be objects");
    reject_unknown(s, {"name", "command", "work_per_byte", "fixed_work", "output_ratio", "filter_probability"},
                   where + ".services");
    ServiceSpec spec;
    spec.name = field<std::string>(s, "name", where, "");
    const std::string swhere = where + " service '" + spec.name + "'";
    if (spec.name.empty()) throw InvalidDescriptor(where + ": every service needs a name");
    spec.command = field<std::vector<std::string>>(s, "command", swhere, {});
    if (spec.command.empty()) throw InvalidDescriptor(swhere + ": 'command' must be a non-empty argv array");
    spec.work_per_byte = field<double>(s, "work_per_byte", swhere, 0.0);
    spec.fixed_work = field<double>(s, "fixed_work", swhere, 0.0);
    spec.output_ratio = field<double>(s, "output_ratio", swhere, 1.0);
    spec.filter_probability = field<double>(s, "filter_probability", swhere, 1.0);
    if (!(spec.work_per_byte >= 0) || !(spec.fixed_work >= 0) || !(spec.output_ratio >= 0) ||
        !(spec.filter_probability >= 0 && spec.filter_probability <= 1)) {
      throw InvalidDescriptor(swhere + ": cost, ratio or filter value out of range");
    }
    if (std::any_of(d.services.begin(), d.services.end(), [&](const ServiceSpec& o) { return o.name == spec.name; })) {
      throw InvalidDescriptor(swhere + ": duplicate service name");
    }
    d.services.push_back(std::move(spec));
  }

  if (!doc.contains("payloads") || !doc["payloads"].is_array() || doc["payloads"].empty()) {
    throw InvalidDescriptor(where + ": 'payloads' must be a non-empty array");
  }
  for (const auto& p : doc["payloads"]) {
    if (!p.is_object()) throw InvalidDescriptor(where + ": payloads must be objects");
    reject_unknown(p, {"id", "bytes", "seed", "file"}, where + ".payloads");
    AssetSpec a;
    a.id = field<std::string>(p, "id", where, "");
    if (a.id.empty()) throw InvalidDescriptor(where + ": every payload needs an id");
    a.payload_bytes = field<std::uint64_t>(p, "bytes", where, 0);
    if (p.contains("file")) {
      std::filesystem::path file = field<std::string>(p, "file", where, "");
      if (file.is_relative()) file = base_dir / file;
      a.content_source = FileContent{file};
      if (a.payload_bytes == 0) {
        std::error_code ec;
        const auto size = std::filesystem::file_size(file, ec);
        if (ec) throw InvalidDescriptor(where + ": payload file " + file.string() + " unreadable");
        a.payload_bytes = size;
      }
    } else {
      a.content_source = GeneratedContent{field<std::uint64_t>(p, "seed", where, fnv1a64(d.name + "/" + a.id))};
    }
    if (a.payload_bytes == 0) throw InvalidDescriptor(where + ": payload '" + a.id + "' needs bytes > 0");
    d.payloads.push_back(std::move(a));
  }

  if (doc.contains("offload_asset")) {
    const auto& o = doc["offload_asset"];
    if (!o.is_object()) throw InvalidDescriptor(where + ": 'offload_asset' must be an object");
    reject_unknown(o, {"service", "bytes"}, where + ".offload_asset");
    const auto target = field<std::string>(o, "service", where, "");
    auto it = std::find_if(d.services.begin(), d.services.end(), [&](const ServiceSpec& s) { return s.name == target; });
    if (it == d.services.end()) {
      throw InvalidDescriptor(where + ": offload_asset names unknown service '" + target + "'");
    }
    it->offload_payload_bytes = field<std::uint64_t>(o, "bytes", where, 0);
  }
  return d;
}

PluginDescriptor load_plugin_descriptor(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidDescriptor("cannot open plugin descriptor " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw InvalidDescriptor(path.string() + ": " + e.what());
  }
  return parse_plugin_descriptor(doc, path.parent_path());
}

// ---------------------------------------------------------------------------
// Registry
// ---------------------------------------------------------------------------

WorkloadRegistry::WorkloadRegistry() {
  for (Profile p : kBuiltinProfiles) {
    entries_.push_back({std::string(to_string(p)), "builtin", make_profile(p)});
  }
}

WorkloadRegistry& WorkloadRegistry::global() {
  static WorkloadRegistry registry;
  return registry;
}

std::string WorkloadRegistry::register_plugin(const PluginDescriptor& descriptor) {
  if (descriptor.name.empty()) throw InvalidDescriptor("plugin name is empty");
  if (descriptor.services.empty()) throw InvalidDescriptor("plugin '" + descriptor.name + "' has no services");
  if (descriptor.payloads.empty()) throw InvalidDescriptor("plugin '" + descriptor.name + "' has no payloads");
  std::lock_guard lock(mutex_);
  if (std::any_of(entries_.begin(), entries_.end(), [&](const Entry& e) { return e.name == descriptor.name; })) {
    throw DuplicateName("workload '" + descriptor.name + "' is already registered");
  }
  entries_.push_back({descriptor.name, "plugin", descriptor.to_workload()});
  return descriptor.name;
}

bool WorkloadRegistry::contains(std::string_view name) const {
  std::lock_guard lock(mutex_);
  return std::any_of(entries_.begin(), entries_.end(), [&](const Entry& e) { return e.name == name; });
}

WorkloadSpec WorkloadRegistry::get(std::string_view name) const {
  std::lock_guard lock(mutex_);
  for (const auto& e : entries_) {
    if (e.name == name) return e.spec;
  }
  throw std::out_of_range("unknown workload '" + std::string(name) + "'");
}

std::vector<WorkloadRegistry::Entry> WorkloadRegistry::entries() const {
  std::lock_guard lock(mutex_);
  return entries_;
}

}  // namespace fogbench
