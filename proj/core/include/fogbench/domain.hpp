#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "fogbench/errors.hpp"

namespace fogbench {

// ---------------------------------------------------------------------------
// Taxonomy
// ---------------------------------------------------------------------------

enum class DeploymentMode { CloudOnly, EdgeOnly, CloudEdge };

inline constexpr DeploymentMode kAllModes[] = {DeploymentMode::CloudOnly, DeploymentMode::EdgeOnly,
                                               DeploymentMode::CloudEdge};

enum class Tier { Cloud, Edge };

/// Named stress levels, totally ordered from None to VeryHigh.
enum class StressLevel { None, Minimal, Low, Medium, High, VeryHigh };

inline constexpr StressLevel kAllStressLevels[] = {StressLevel::None, StressLevel::Minimal,
                                                   StressLevel::Low,  StressLevel::Medium,
                                                   StressLevel::High, StressLevel::VeryHigh};

enum class Profile { YoloLike, SphinxLike, AeneasLike, PokemonLike, FoglampLike, RealfdLike, Custom };

inline constexpr Profile kBuiltinProfiles[] = {Profile::YoloLike,    Profile::SphinxLike,
                                               Profile::AeneasLike,  Profile::PokemonLike,
                                               Profile::FoglampLike, Profile::RealfdLike};

std::string_view to_string(DeploymentMode mode);
std::string_view to_string(Tier tier);
std::string_view to_string(StressLevel level);
std::string_view to_string(Profile profile);

std::optional<DeploymentMode> parse_mode(std::string_view text);
std::optional<Tier> parse_tier(std::string_view text);
std::optional<StressLevel> parse_stress_level(std::string_view text);
std::optional<Profile> parse_profile(std::string_view text);

// ---------------------------------------------------------------------------
// Nodes
// ---------------------------------------------------------------------------

/// Deterministic stand-in for a physical machine. Rates are per second.
struct VirtualParams {
  double compute_speed = 1e9;        // work-units / s
  double uplink_bandwidth = 1e7;     // bytes / s into the node
  double downlink_bandwidth = 1e7;   // bytes / s out of the node
  double link_latency = 0.0;         // s, one way
  double jitter_fraction = 0.0;      // [0, 1)
  std::uint64_t seed = 0;

  // Synthetic platform values reported by probe_platform.
  int core_count = 1;
  std::string cpu_model = "virtual-cpu";
  double cpu_frequency = 1e9;        // Hz
  double uptime = 0.0;               // s
  double io_read_rate = 1e8;         // bytes / s
  double io_write_rate = 5e7;        // bytes / s
  double unzip_work_per_byte = 20.0; // work-units per archive byte
  double ram_stressor_penalty = 0.1; // fractional ET penalty per RAM stressor

  bool operator==(const VirtualParams&) const = default;
};

/// Parameters of a node driven through a remote command transport.
struct TransportParams {
  std::string adapter = "local";     // registered adapter name
  std::string address;               // adapter-specific (host, directory, ...)
  std::string remote_dir = "fogbench";
  /// Run once per (node, workload); tokens: {workload}, {remote_dir}.
  std::vector<std::string> provision_command = {"mkdir", "-p", "{remote_dir}/{workload}"};
  /// Used for services without their own command; tokens: {work}, {input}, {output}.
  std::vector<std::string> work_command = {
      "sh", "-c", "i=0; while [ $i -lt {work} ]; do i=$((i+1)); done"};
  /// Scales work-units to the integer {work} token.
  double work_scale = 1e-6;
  std::optional<int> core_count;     // probed with `nproc` when absent

  bool operator==(const TransportParams&) const = default;
};

struct NodeSpec {
  std::string id;
  Tier tier = Tier::Cloud;
  std::variant<VirtualParams, TransportParams> backend;
  std::map<std::string, std::string> labels;

  bool is_virtual() const noexcept { return std::holds_alternative<VirtualParams>(backend); }
  const VirtualParams& virtual_params() const { return std::get<VirtualParams>(backend); }
  const TransportParams& transport_params() const { return std::get<TransportParams>(backend); }

  bool operator==(const NodeSpec&) const = default;
};

// ---------------------------------------------------------------------------
// Workloads
// ---------------------------------------------------------------------------

struct ServiceSpec {
  std::string name;
  double work_per_byte = 0.0;        // work-units per input byte
  double fixed_work = 0.0;           // work-units per invocation
  double output_ratio = 1.0;         // output bytes per input byte
  double filter_probability = 1.0;   // probability an input passes through
  std::uint64_t offload_payload_bytes = 0;
  /// Optional command template for external nodes and plugins;
  /// tokens: {input}, {output}, {work}.
  std::vector<std::string> command;

  double work_for(std::uint64_t input_bytes) const noexcept {
    return fixed_work + work_per_byte * static_cast<double>(input_bytes);
  }

  bool operator==(const ServiceSpec&) const = default;
};

struct GeneratedContent {
  std::uint64_t seed = 0;
  bool operator==(const GeneratedContent&) const = default;
};

struct FileContent {
  std::filesystem::path path;
  bool operator==(const FileContent&) const = default;
};

struct AssetSpec {
  std::string id;
  std::uint64_t payload_bytes = 0;
  std::variant<GeneratedContent, FileContent> content_source;

  bool operator==(const AssetSpec&) const = default;
};

/// Materializes the asset bytes. Throws IoError when a file source cannot be
/// read or its size disagrees with payload_bytes.
std::vector<std::uint8_t> materialize(const AssetSpec& asset);

struct WorkloadSpec {
  std::string name;
  Profile profile = Profile::Custom;
  std::vector<ServiceSpec> services;
  std::vector<AssetSpec> assets;
  bool requires_cloud_asset = true;
  std::optional<double> audio_length_seconds;
  /// Free-form tags such as the application type ("LC", "BI", "CI", "LA").
  std::map<std::string, std::string> labels;

  const ServiceSpec* find_service(std::string_view service) const;

  bool operator==(const WorkloadSpec&) const = default;
};

// ---------------------------------------------------------------------------
// Placement
// ---------------------------------------------------------------------------

struct Assignment {
  std::string service;
  std::string node;
  bool operator==(const Assignment&) const = default;
};

/// Service -> node map kept in pipeline order. For cloud-edge placements
/// `offload_source` names the cloud node that ships offload payloads.
struct ServicePlacement {
  std::vector<Assignment> assignments;
  std::optional<std::string> offload_source;

  const std::string& node_for(std::string_view service) const;
  /// Stable, comma-free text form, e.g. "GSC@edge-1+MD@cloud-1|offload@cloud-1".
  std::string label() const;

  bool operator==(const ServicePlacement&) const = default;
};

/// CloudOnly / EdgeOnly yield one placement on the given node. CloudEdge yields
/// one prefix split per k = 1..n-1 (first k services on the edge node), in
/// increasing k; a single-service workload has none.
std::vector<ServicePlacement> placements_for_mode(const WorkloadSpec& workload, DeploymentMode mode,
                                                  const std::string& cloud_node,
                                                  const std::string& edge_node);

/// Every service on the edge node, offload payloads shipped from the cloud node.
ServicePlacement full_offload_placement(const WorkloadSpec& workload, const std::string& cloud_node,
                                        const std::string& edge_node);

// ---------------------------------------------------------------------------
// Run configuration
// ---------------------------------------------------------------------------

struct NamedPlacement {
  std::string workload;
  ServicePlacement placement;
  bool operator==(const NamedPlacement&) const = default;
};

/// Result-store sink: a virtual link, a local directory, or nothing.
struct ResultStoreSpec {
  enum class Kind { Virtual, Directory, None };
  Kind kind = Kind::Virtual;
  VirtualParams link{.compute_speed = 1e9,
                     .uplink_bandwidth = 5e7,
                     .downlink_bandwidth = 5e7,
                     .link_latency = 0.02,
                     .jitter_fraction = 0.0,
                     .seed = 0x5703e};
  std::filesystem::path directory;

  bool operator==(const ResultStoreSpec&) const = default;
};

struct LoadSettings {
  int requests_per_user = 10;
  std::optional<double> duration_seconds;  // replaces requests_per_user when set
  double think_time = 0.0;
  bool operator==(const LoadSettings&) const = default;
};

/// Sizes used by the platform probe.
struct ProbeSettings {
  std::uint64_t archive_bytes = 34ull * 1000 * 1000;
  std::uint64_t download_bytes = 200ull * 1000 * 1000;
  std::uint64_t io_bytes = 16ull * 1000 * 1000;
  bool operator==(const ProbeSettings&) const = default;
};

/// Which tiers a stress level is applied to.
enum class StressTarget { Edge, Cloud, All };

std::string_view to_string(StressTarget target);
std::optional<StressTarget> parse_stress_target(std::string_view text);

struct RunConfig {
  std::vector<NodeSpec> nodes;
  std::vector<WorkloadSpec> workloads;
  std::vector<DeploymentMode> modes;
  std::vector<NamedPlacement> placements;
  int repetitions = 25;
  std::vector<StressLevel> stress_levels = {StressLevel::None};
  std::vector<int> user_counts = {1};
  ResultStoreSpec result_store;
  double cost_rate_per_hour = 0.0;
  std::filesystem::path output_dir = "fogbench-out";
  std::uint64_t seed = 0x5eed;
  LoadSettings load;
  ProbeSettings probe;
  StressTarget stress_target = StressTarget::Edge;

  const NodeSpec* find_node(std::string_view id) const;
  const WorkloadSpec* find_workload(std::string_view name) const;

  bool operator==(const RunConfig&) const = default;
};

/// A RunConfig whose cross references resolve and whose invariants hold.
/// Only validate_run_config can create one.
class ValidatedRunConfig {
 public:
  const RunConfig& config() const noexcept { return config_; }
  const RunConfig* operator->() const noexcept { return &config_; }

 private:
  explicit ValidatedRunConfig(RunConfig config) : config_(std::move(config)) {}
  friend ValidatedRunConfig validate_run_config(RunConfig config);

  RunConfig config_;
};

/// Checks every invariant; throws ValidationError listing all violations.
ValidatedRunConfig validate_run_config(RunConfig config);

/// Non-throwing variant used by the CLI.
std::vector<Violation> collect_violations(const RunConfig& config);

}  // namespace fogbench
