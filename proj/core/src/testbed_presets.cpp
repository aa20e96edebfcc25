#include "fogbench/testbed_presets.hpp"

#include "fogbench/workloads.hpp"

namespace fogbench {

std::vector<NodeSpec> default_virtual_testbed() {
  VirtualParams cloud;
  cloud.compute_speed = 1e9;
  cloud.uplink_bandwidth = 20e6;
  cloud.downlink_bandwidth = 20e6;
  cloud.link_latency = 0.1;
  cloud.jitter_fraction = 0.05;
  cloud.seed = 1;
  cloud.core_count = 8;
  cloud.cpu_model = "virtual-cloud-x86";
  cloud.cpu_frequency = 2.5e9;
  cloud.io_read_rate = 2e8;
  cloud.io_write_rate = 1e8;

  VirtualParams edge;
  edge.compute_speed = 2e8;
  edge.uplink_bandwidth = 5e6;
  edge.downlink_bandwidth = 5e6;
  edge.link_latency = 0.01;
  edge.jitter_fraction = 0.05;
  edge.seed = 2;
  edge.core_count = 4;
  edge.cpu_model = "virtual-edge-arm";
  edge.cpu_frequency = 1.5e9;
  edge.io_read_rate = 4e7;
  edge.io_write_rate = 2e7;

  return {NodeSpec{"cloud-1", Tier::Cloud, cloud, {}}, NodeSpec{"edge-1", Tier::Edge, edge, {}}};
}

RunConfig default_run_config() {
  RunConfig c;
  c.nodes = default_virtual_testbed();
  for (Profile p : kBuiltinProfiles) c.workloads.push_back(make_profile(p));
  c.modes = {DeploymentMode::CloudOnly, DeploymentMode::EdgeOnly};
  c.repetitions = 1;
  return c;
}

}  // namespace fogbench
