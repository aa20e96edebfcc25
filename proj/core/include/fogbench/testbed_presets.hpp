#pragma once

#include <vector>

#include "fogbench/domain.hpp"

namespace fogbench {

/// Calibrated two-node virtual testbed. Against the cloud node, the edge node
/// computes 5x slower, sits 10x closer (link latency) and has 4x less
/// bandwidth to the observer.
///
///   cloud-1: 1e9 wu/s, 20 MB/s up and down, 100 ms, 8 cores
///   edge-1:  2e8 wu/s,  5 MB/s up and down,  10 ms, 4 cores
///
/// Both nodes use 5% jitter.
std::vector<NodeSpec> default_virtual_testbed();

/// The built-in workloads on the default testbed in cloud-only and edge-only
/// modes, one repetition; a starting point for tests and examples.
RunConfig default_run_config();

}  // namespace fogbench
