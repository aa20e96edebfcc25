#pragma once

#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "fogbench/domain.hpp"

namespace fogbench {

/// Partial replacement for one service of a built-in profile.
struct ServiceOverride {
  std::optional<double> work_per_byte;
  std::optional<double> fixed_work;
  std::optional<double> output_ratio;
  std::optional<double> filter_probability;
  std::optional<std::uint64_t> offload_payload_bytes;
  std::optional<std::vector<std::string>> command;

  bool operator==(const ServiceOverride&) const = default;
};

struct ProfileOverrides {
  std::optional<std::string> name;
  std::map<std::string, ServiceOverride> services;  // keyed by service name
  std::optional<std::vector<AssetSpec>> assets;     // replaces the default assets
  std::optional<int> asset_count;                   // generated assets of the default size
  std::optional<std::uint64_t> asset_bytes;         // size of generated assets
  std::optional<double> audio_length_seconds;

  bool operator==(const ProfileOverrides&) const = default;
};

/// Built-in synthetic profiles. Magnitudes are calibration constants for the
/// default virtual testbed. Throws InvalidDescriptor for overrides naming an
/// unknown service; Custom has no built-in shape and is rejected too.
WorkloadSpec make_profile(Profile profile, const ProfileOverrides& overrides = {});

/// A workload supplied as a descriptor file rather than built in.
struct PluginDescriptor {
  std::string name;
  std::vector<ServiceSpec> services;  // each carries a command template
  std::vector<AssetSpec> payloads;
  bool requires_cloud_asset = true;
  std::map<std::string, std::string> labels;

  WorkloadSpec to_workload() const;
};

/// Throws InvalidDescriptor naming the problem.
PluginDescriptor parse_plugin_descriptor(const nlohmann::json& doc,
                                         const std::filesystem::path& base_dir = {});
PluginDescriptor load_plugin_descriptor(const std::filesystem::path& path);

/// Name -> workload lookup over the built-in profiles plus registered plugins.
class WorkloadRegistry {
 public:
  struct Entry {
    std::string name;
    std::string source;  // "builtin" or "plugin"
    WorkloadSpec spec;
  };

  WorkloadRegistry();

  static WorkloadRegistry& global();

  /// Throws DuplicateName or InvalidDescriptor; returns the workload name.
  std::string register_plugin(const PluginDescriptor& descriptor);

  bool contains(std::string_view name) const;
  /// Throws std::out_of_range.
  WorkloadSpec get(std::string_view name) const;
  std::vector<Entry> entries() const;

 private:
  mutable std::mutex mutex_;
  std::vector<Entry> entries_;
};

}  // namespace fogbench
