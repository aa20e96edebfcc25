#pragma once

#include <cstdlib>
#include <filesystem>
#include <string>
#include <vector>

#include "fogbench/domain.hpp"
#include "fogbench/testbed_presets.hpp"

namespace fogbench::test {

inline NodeSpec virtual_node(std::string id, Tier tier, VirtualParams p) {
  return NodeSpec{std::move(id), tier, p, {}};
}

/// The default testbed with jitter switched off, for exact oracles.
inline std::vector<NodeSpec> quiet_testbed() {
  auto nodes = default_virtual_testbed();
  for (auto& n : nodes) std::get<VirtualParams>(n.backend).jitter_fraction = 0.0;
  return nodes;
}

inline ResultStoreSpec no_store() {
  ResultStoreSpec s;
  s.kind = ResultStoreSpec::Kind::None;
  return s;
}

/// Fresh scratch directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("fogbench-test-" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline RunConfig single_cell_config(WorkloadSpec w, DeploymentMode mode, int repetitions) {
  RunConfig c;
  c.nodes = default_virtual_testbed();
  c.workloads = {std::move(w)};
  c.modes = {mode};
  c.repetitions = repetitions;
  return c;
}

}  // namespace fogbench::test
