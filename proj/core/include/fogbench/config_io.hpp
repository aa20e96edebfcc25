#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "fogbench/domain.hpp"
#include "fogbench/workloads.hpp"

namespace fogbench {

/// Builds a RunConfig from its JSON form. Unknown keys and wrong types raise
/// ConfigError naming the JSON path. Workloads either reference a built-in
/// profile or registered plugin by "profile" (with optional overrides) or
/// spell out "services" and "assets" in full. Plugin descriptors listed under
/// "plugins" are registered in `registry` first; relative paths resolve
/// against `base_dir`.
RunConfig parse_run_config(const nlohmann::json& doc, const std::filesystem::path& base_dir = {},
                           WorkloadRegistry& registry = WorkloadRegistry::global());

/// Throws ConfigError (syntax, schema) or IoError (unreadable file).
RunConfig load_run_config(const std::filesystem::path& path,
                          WorkloadRegistry& registry = WorkloadRegistry::global());

/// Fully expanded form; parse_run_config(to_json(c)) == c.
nlohmann::json to_json(const RunConfig& config);

/// 16 hex digits of a hash over the canonical JSON form, output_dir excluded.
std::string config_hash(const RunConfig& config);

}  // namespace fogbench
