#include "fogbench_cli/cli.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <random>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "fogbench/config_io.hpp"
#include "fogbench/node_runtime.hpp"
#include "fogbench/orchestrator.hpp"
#include "fogbench/report.hpp"
#include "fogbench/transport.hpp"

namespace fogbench::cli {

namespace fs = std::filesystem;

namespace {

struct Options {
  std::vector<std::string> plugins;
  std::string config;
  std::string node;
  std::string seed;
  std::string out;
  std::vector<std::string> modes;
  std::optional<int> repetitions;
};

/// Loads the config file; `has_output_dir` reports whether the file sets one.
RunConfig load_config(const std::string& path, WorkloadRegistry& registry, bool* has_output_dir = nullptr) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path);
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
  if (has_output_dir) *has_output_dir = doc.is_object() && doc.contains("output_dir");
  return parse_run_config(doc, fs::path(path).parent_path(), registry);
}

void print_violations(std::ostream& err, const std::vector<Violation>& violations) {
  for (const auto& v : violations) {
    err << "  " << v.field;
    if (!v.entity.empty()) err << " [" << v.entity << "]";
    err << ": " << v.message << "\n";
  }
}

std::uint64_t parse_seed(const std::string& text) {
  if (text == "random") {
    std::random_device rd;
    return (static_cast<std::uint64_t>(rd()) << 32) | rd();
  }
  std::uint64_t v = 0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) throw CLI::ValidationError("--seed", "expected an integer or 'random'");
  return v;
}

int cmd_validate(const Options& o, WorkloadRegistry& registry, std::ostream& out, std::ostream& err) {
  RunConfig cfg = load_config(o.config, registry);
  const auto violations = collect_violations(cfg);
  if (!violations.empty()) {
    err << o.config << ": " << violations.size() << " violation(s)\n";
    print_violations(err, violations);
    return kExitFailure;
  }
  out << o.config << ": ok (" << cfg.nodes.size() << " nodes, " << cfg.workloads.size() << " workloads, "
      << enumerate_cells(cfg).size() << " cells)\n";
  return kExitOk;
}

int cmd_list(WorkloadRegistry& registry, std::ostream& out) {
  for (const auto& e : registry.entries()) {
    std::string services;
    for (const auto& s : e.spec.services) services += (services.empty() ? "" : ">") + s.name;
    out << std::left << std::setw(16) << e.name << std::setw(9) << e.source << services;
    if (auto it = e.spec.labels.find("type"); it != e.spec.labels.end()) out << "  (" << it->second << ")";
    out << "\n";
  }
  return kExitOk;
}

int cmd_probe(const Options& o, WorkloadRegistry& registry, std::ostream& out, std::ostream& err) {
  RunConfig cfg = load_config(o.config, registry);
  if (!cfg.find_node(o.node)) {
    err << "error: no node '" << o.node << "' in " << o.config << "\n";
    return kExitFailure;
  }
  Testbed testbed(cfg.nodes, cfg.result_store, TransportRegistry::global());
  const PlatformMetrics m = testbed.probe_platform(o.node, cfg.probe);
  out << "node " << o.node << "\n";
  auto line = [&](const char* name, const auto& value) { out << "  " << std::left << std::setw(15) << name << value << "\n"; };
  if (m.cpu_model) line("cpu_model", *m.cpu_model);
  if (m.core_count) line("core_count", *m.core_count);
  if (m.cpu_frequency) line("cpu_frequency", *m.cpu_frequency);
  if (m.uptime) line("uptime", *m.uptime);
  if (m.unzip_time) line("unzip_time", *m.unzip_time);
  if (m.download_rate) line("download_rate", *m.download_rate);
  if (m.io_read_rate) line("io_read_rate", *m.io_read_rate);
  if (m.io_write_rate) line("io_write_rate", *m.io_write_rate);
  for (const auto& miss : m.missing) line("missing", miss);
  return kExitOk;
}

int cmd_run(const Options& o, WorkloadRegistry& registry, std::ostream& out, std::ostream& err) {
  bool file_has_out = false;
  RunConfig cfg = load_config(o.config, registry, &file_has_out);

  if (!o.seed.empty()) cfg.seed = parse_seed(o.seed);
  if (!o.modes.empty()) {
    cfg.modes.clear();
    for (const auto& m : o.modes) {
      auto mode = parse_mode(m);
      if (!mode) throw CLI::ValidationError("--modes", "unknown mode '" + m + "'");
      cfg.modes.push_back(*mode);
    }
  }
  if (o.repetitions) cfg.repetitions = *o.repetitions;
  if (!o.out.empty()) {
    cfg.output_dir = o.out;
  } else if (const char* env = std::getenv(kOutDirEnv); env && *env && !file_has_out) {
    cfg.output_dir = env;
  }

  ValidatedRunConfig validated = [&] {
    try {
      return validate_run_config(std::move(cfg));
    } catch (const ValidationError& e) {
      err << o.config << ": " << e.violations().size() << " violation(s)\n";
      print_violations(err, e.violations());
      throw;
    }
  }();

  RunOptions options;
  options.on_cell = [&](const CellSummary& s) {
    out << s.key.workload << " " << to_string(s.key.mode) << " " << s.key.placement.label() << " stress="
        << to_string(s.key.stress) << " users=" << s.key.users << ": " << s.records << " records, " << s.failures
        << " failed, mean rtt " << std::fixed << std::setprecision(6) << s.mean_rtt << " s\n"
        << std::defaultfloat;
  };
  const ResultSet results = run_benchmark(validated, options);
  const ReportPaths paths = write_reports(results, validated->output_dir, make_run_id(validated.config()));

  out << "seed " << results.seed << ": " << results.records.size() << " records, " << results.failure_count()
      << " failed\n";
  out << "csv: " << paths.csv.string() << "\n";
  out << "aggregate: " << paths.aggregate_csv.string() << "\n";
  out << "report: " << paths.verbose.string() << "\n";
  return results.failure_count() == 0 ? kExitOk : kExitFailure;
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Cloud/edge benchmarking harness.", "fogbench"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--plugin", o.plugins, "Register a workload plugin descriptor (repeatable)")
      ->check(CLI::ExistingFile);

  auto* validate = app.add_subcommand("validate", "Check a run config and print every violation");
  validate->add_option("config", o.config, "Run config (JSON)")->required();

  auto* list = app.add_subcommand("list-workloads", "List built-in and plugin workloads");

  auto* probe = app.add_subcommand("probe", "Print platform metrics of one node");
  probe->add_option("config", o.config, "Run config (JSON)")->required();
  probe->add_option("--node", o.node, "Node id")->required();

  auto* run = app.add_subcommand("run", "Run the benchmark campaign and write reports");
  run->add_option("config", o.config, "Run config (JSON)")->required();
  run->add_option("--seed", o.seed, "Run seed: an integer or 'random' (default: the config's seed)");
  run->add_option("--out", o.out,
                  std::string("Output directory (default: the config's output_dir, else $") + kOutDirEnv + ")");
  run->add_option("--modes", o.modes, "Deployment modes: cloud-only, edge-only, cloud-edge")->expected(1, -1);
  run->add_option("--repetitions", o.repetitions, "Repetitions per asset")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    const auto subs = app.get_subcommands();
    out << (subs.empty() ? app.help("", CLI::AppFormatMode::All) : subs.front()->help());
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    WorkloadRegistry registry;
    for (const auto& p : o.plugins) registry.register_plugin(load_plugin_descriptor(p));
    if (*validate) return cmd_validate(o, registry, out, err);
    if (*list) return cmd_list(registry, out);
    if (*probe) return cmd_probe(o, registry, out, err);
    return cmd_run(o, registry, out, err);
  } catch (const CLI::ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ValidationError&) {
    return kExitFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}

}  // namespace fogbench::cli
