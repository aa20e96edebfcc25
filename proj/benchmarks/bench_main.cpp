#include <benchmark/benchmark.h>

#include <random>
#include <sstream>

#include "fogbench/loadgen.hpp"
#include "fogbench/orchestrator.hpp"
#include "fogbench/report.hpp"
#include "fogbench/testbed_presets.hpp"
#include "fogbench/workloads.hpp"

using namespace fogbench;

static void BM_Pipeline(benchmark::State& state) {
  Testbed tb(default_virtual_testbed());
  const auto w = make_profile(Profile::RealfdLike);
  const auto p = placements_for_mode(w, DeploymentMode::CloudEdge, "cloud-1", "edge-1")[0];
  for (const auto& a : p.assignments) tb.provision_environment(a.node, w);
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(run_pipeline(tb, w, p, w.assets[0], seed++));
}
BENCHMARK(BM_Pipeline);

static void BM_LoadSimulation(benchmark::State& state) {
  const auto w = make_profile(Profile::SphinxLike);
  const auto p = placements_for_mode(w, DeploymentMode::EdgeOnly, "cloud-1", "edge-1")[0];
  LoadProfile prof;
  prof.user_count = static_cast<int>(state.range(0));
  prof.requests_per_user = 10;
  for (auto _ : state) {
    Testbed tb(default_virtual_testbed());
    tb.provision_environment("edge-1", w);
    benchmark::DoNotOptimize(run_load(prof, tb, {&w, &p, &w.assets[0], 1}));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0) * 10);
}
BENCHMARK(BM_LoadSimulation)->Arg(2)->Arg(10)->Arg(50);

static void BM_Summarize(benchmark::State& state) {
  std::mt19937_64 rng(1);
  std::exponential_distribution<double> lat(2.0);
  std::vector<RequestRecord> records(static_cast<std::size_t>(state.range(0)));
  for (auto& r : records) r.latency = lat(rng);
  for (auto _ : state) benchmark::DoNotOptimize(summarize(records, 100.0));
}
BENCHMARK(BM_Summarize)->Arg(1000)->Arg(100000);

static void BM_DefaultCampaign(benchmark::State& state) {
  auto cfg = default_run_config();
  cfg.repetitions = 25;
  const auto validated = validate_run_config(cfg);
  RunOptions o;
  o.probe_platforms = false;
  for (auto _ : state) {
    auto rs = run_benchmark(validated, o);
    benchmark::DoNotOptimize(render_verbose(rs));
  }
}
BENCHMARK(BM_DefaultCampaign)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
