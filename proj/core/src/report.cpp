#include "fogbench/report.hpp"

#include <algorithm>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "fogbench/config_io.hpp"
#include "fogbench/csv.hpp"

namespace fogbench {

namespace fs = std::filesystem;

const std::vector<std::string>& csv_columns() {
  static const std::vector<std::string> columns = {
      "workload", "mode",       "placement",  "stress",       "users",         "asset",     "repetition",
      "t1",       "et",         "t2",         "t3",           "t4",            "rtt",       "cl",
      "complete_comp", "complete_comm", "cost", "rtf",        "bytes_up",      "bytes_down", "bytes_down_ce",
      "rate_up",  "rate_down",  "rate_down_ce", "throughput", "success",       "fail",      "avg_rt",
      "stddev_rt", "avg_latency", "concurrency", "record_ok"};
  return columns;
}

std::vector<std::string> csv_fields(const Record& r) {
  const auto& k = r.key;
  const auto& t = r.timing;
  const auto& m = r.metrics;
  std::vector<std::string> f = {
      k.cell.workload,
      std::string(to_string(k.cell.mode)),
      k.cell.placement.label(),
      std::string(to_string(k.cell.stress)),
      std::to_string(k.cell.users),
      k.asset,
      std::to_string(k.repetition),
      format_number(t.t1),
      format_number(t.et),
      format_number(t.t2),
      format_number(t.t3),
      format_number(t.t4),
      format_number(m.rtt),
      format_number(m.communication_latency),
      format_number(m.complete_computation_latency),
      format_number(m.complete_communication_latency),
      format_number(m.cost),
      m.rtf ? format_number(*m.rtf) : std::string(),
      std::to_string(t.bytes_up),
      std::to_string(t.bytes_down),
      std::to_string(t.bytes_down_cloud_edge),
      format_number(m.bytes_up_rate),
      format_number(m.bytes_down_rate),
      format_number(m.bytes_down_cloud_edge_rate),
  };
  if (r.load) {
    const auto& l = *r.load;
    for (auto v : {std::to_string(l.throughput), std::to_string(l.success_count), std::to_string(l.fail_count),
                   format_number(l.avg_response_time), format_number(l.stddev_response_time),
                   format_number(l.avg_latency), format_number(l.concurrency)}) {
      f.push_back(v);
    }
  } else {
    f.insert(f.end(), 7, std::string());
  }
  f.push_back(r.success ? "1" : "0");
  return f;
}

void write_csv(const ResultSet& results, const fs::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  write_csv_row(out, csv_columns());
  for (const auto& r : results.records) write_csv_row(out, csv_fields(r));
  if (!out) throw IoError("write failed for " + path.string());
}

std::optional<ServicePlacement> parse_placement_label(std::string_view label) {
  ServicePlacement p;
  if (auto bar = label.find('|'); bar != std::string_view::npos) {
    std::string_view tail = label.substr(bar + 1);
    if (!tail.starts_with("offload@")) return std::nullopt;
    p.offload_source = std::string(tail.substr(8));
    label = label.substr(0, bar);
  }
  while (!label.empty()) {
    const auto plus = label.find('+');
    std::string_view item = label.substr(0, plus);
    const auto at = item.find('@');
    if (at == std::string_view::npos || at == 0) return std::nullopt;
    p.assignments.push_back({std::string(item.substr(0, at)), std::string(item.substr(at + 1))});
    if (plus == std::string_view::npos) break;
    label = label.substr(plus + 1);
  }
  if (p.assignments.empty()) return std::nullopt;
  return p;
}

std::vector<Record> read_csv(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  auto rows = parse_csv(in);
  if (rows.empty() || rows.front() != csv_columns()) throw IoError(path.string() + ": unexpected csv header");
  const std::size_t width = csv_columns().size();

  std::vector<Record> out;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& f = rows[i];
    const std::string where = path.string() + ":" + std::to_string(i + 1);
    if (f.size() != width) throw IoError(where + ": expected " + std::to_string(width) + " fields");
    Record r;
    auto& k = r.key;
    k.cell.workload = f[0];
    auto mode = parse_mode(f[1]);
    auto placement = parse_placement_label(f[2]);
    auto stress = parse_stress_level(f[3]);
    if (!mode || !placement || !stress) throw IoError(where + ": bad key columns");
    k.cell.mode = *mode;
    k.cell.placement = *placement;
    k.cell.stress = *stress;
    k.cell.users = static_cast<int>(parse_unsigned(f[4]));
    k.asset = f[5];
    k.repetition = static_cast<int>(parse_unsigned(f[6]));

    auto& t = r.timing;
    t.t1 = parse_number(f[7]);
    t.et = parse_number(f[8]);
    t.t2 = parse_number(f[9]);
    t.t3 = parse_number(f[10]);
    t.t4 = parse_number(f[11]);
    auto& m = r.metrics;
    m.rtt = parse_number(f[12]);
    m.communication_latency = parse_number(f[13]);
    m.complete_computation_latency = parse_number(f[14]);
    m.complete_communication_latency = parse_number(f[15]);
    m.cost = parse_number(f[16]);
    if (!f[17].empty()) m.rtf = parse_number(f[17]);
    t.bytes_up = parse_unsigned(f[18]);
    t.bytes_down = parse_unsigned(f[19]);
    t.bytes_down_cloud_edge = parse_unsigned(f[20]);
    m.bytes_up_rate = parse_number(f[21]);
    m.bytes_down_rate = parse_number(f[22]);
    m.bytes_down_cloud_edge_rate = parse_number(f[23]);
    if (!f[24].empty()) {
      LoadSummary l;
      l.throughput = parse_unsigned(f[24]);
      l.success_count = parse_unsigned(f[25]);
      l.fail_count = parse_unsigned(f[26]);
      l.avg_response_time = parse_number(f[27]);
      l.stddev_response_time = parse_number(f[28]);
      l.avg_latency = parse_number(f[29]);
      l.concurrency = parse_number(f[30]);
      r.load = l;
    }
    r.success = f[31] == "1";
    out.push_back(std::move(r));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Aggregates
// ---------------------------------------------------------------------------

std::vector<CellAggregate> aggregate_cells(const ResultSet& results) {
  std::vector<CellAggregate> cells;
  std::vector<std::vector<MetricSample>> samples;
  std::vector<std::vector<LoadSummary>> loads;

  for (const auto& r : results.records) {
    auto it = std::find_if(cells.begin(), cells.end(), [&](const CellAggregate& c) { return c.key == r.key.cell; });
    std::size_t idx;
    if (it == cells.end()) {
      cells.push_back({r.key.cell, 0, 0, std::nullopt, std::nullopt});
      samples.emplace_back();
      loads.emplace_back();
      idx = cells.size() - 1;
    } else {
      idx = static_cast<std::size_t>(it - cells.begin());
    }
    ++cells[idx].records;
    if (!r.success) {
      ++cells[idx].failures;
    } else {
      samples[idx].push_back({r.key.cell, r.timing, r.metrics});
    }
    if (r.load) loads[idx].push_back(*r.load);
  }

  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (!samples[i].empty()) cells[i].metrics = aggregate(samples[i]);
    if (!loads[i].empty()) {
      LoadSummary mean;
      const double n = static_cast<double>(loads[i].size());
      for (const auto& l : loads[i]) {
        mean.throughput += l.throughput;
        mean.success_count += l.success_count;
        mean.fail_count += l.fail_count;
        mean.avg_response_time += l.avg_response_time / n;
        mean.stddev_response_time += l.stddev_response_time / n;
        mean.avg_latency += l.avg_latency / n;
        mean.concurrency += l.concurrency / n;
      }
      cells[i].load = mean;
    }
  }
  return cells;
}

std::vector<ModeComparison> compare_modes(const std::vector<CellAggregate>& cells) {
  std::vector<ModeComparison> out;
  for (const auto& c : cells) {
    if (!c.metrics) continue;
    auto group = std::find_if(out.begin(), out.end(), [&](const ModeComparison& m) {
      return m.workload == c.key.workload && m.stress == c.key.stress && m.users == c.key.users;
    });
    if (group == out.end()) {
      out.push_back({c.key.workload, c.key.stress, c.key.users, {}, 0});
      group = out.end() - 1;
    }
    ModeRow row{c.key.mode, c.key.placement.label(), c.metrics->rtt.mean, c.metrics->communication_latency.mean,
                c.metrics->complete_computation_latency.mean};
    auto existing = std::find_if(group->rows.begin(), group->rows.end(),
                                 [&](const ModeRow& r) { return r.mode == row.mode; });
    if (existing == group->rows.end()) {
      group->rows.push_back(std::move(row));
    } else if (row.complete_computation_latency < existing->complete_computation_latency) {
      *existing = std::move(row);
    }
  }
  for (auto& g : out) {
    for (std::size_t i = 1; i < g.rows.size(); ++i) {
      if (g.rows[i].complete_computation_latency < g.rows[g.best].complete_computation_latency) g.best = i;
    }
  }
  return out;
}

namespace {

std::string fixed(double v, int precision = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", precision, v);
  return buf;
}

std::string general(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string mean_sd(const Stat& s) { return fixed(s.mean) + " +/- " + fixed(s.stddev); }

void stat_fields(std::vector<std::string>& f, const std::optional<Stat>& s) {
  f.push_back(s ? format_number(s->mean) : std::string());
  f.push_back(s ? format_number(s->stddev) : std::string());
}

template <typename T>
std::string join(const std::vector<T>& items, const char* sep = ", ") {
  std::string out;
  for (const auto& i : items) {
    if (!out.empty()) out += sep;
    if constexpr (std::is_arithmetic_v<T>) {
      out += std::to_string(i);
    } else {
      out += std::string(to_string(i));
    }
  }
  return out;
}

}  // namespace

void write_agg_csv(const ResultSet& results, const fs::path& path) {
  static const char* metrics[] = {"t1",  "et",   "t2",      "t3",        "t4",       "rtt",    "cl",
                                  "complete_comp", "complete_comm", "cost", "rtf", "rate_up", "rate_down",
                                  "rate_down_ce"};
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  std::vector<std::string> header = {"workload", "mode", "placement", "stress", "users", "records", "failures"};
  for (const char* m : metrics) {
    header.push_back(std::string(m) + "_mean");
    header.push_back(std::string(m) + "_sd");
  }
  write_csv_row(out, header);

  for (const auto& c : aggregate_cells(results)) {
    std::vector<std::string> f = {c.key.workload,
                                  std::string(to_string(c.key.mode)),
                                  c.key.placement.label(),
                                  std::string(to_string(c.key.stress)),
                                  std::to_string(c.key.users),
                                  std::to_string(c.records),
                                  std::to_string(c.failures)};
    const auto* a = c.metrics ? &*c.metrics : nullptr;
    auto s = [&](auto member) -> std::optional<Stat> {
      if (!a) return std::nullopt;
      return a->*member;
    };
    stat_fields(f, s(&AggregateMetrics::t1));
    stat_fields(f, s(&AggregateMetrics::et));
    stat_fields(f, s(&AggregateMetrics::t2));
    stat_fields(f, s(&AggregateMetrics::t3));
    stat_fields(f, s(&AggregateMetrics::t4));
    stat_fields(f, s(&AggregateMetrics::rtt));
    stat_fields(f, s(&AggregateMetrics::communication_latency));
    stat_fields(f, s(&AggregateMetrics::complete_computation_latency));
    stat_fields(f, s(&AggregateMetrics::complete_communication_latency));
    stat_fields(f, s(&AggregateMetrics::cost));
    stat_fields(f, a ? a->rtf : std::nullopt);
    stat_fields(f, s(&AggregateMetrics::bytes_up_rate));
    stat_fields(f, s(&AggregateMetrics::bytes_down_rate));
    stat_fields(f, s(&AggregateMetrics::bytes_down_cloud_edge_rate));
    write_csv_row(out, f);
  }
  if (!out) throw IoError("write failed for " + path.string());
}

std::string render_verbose(const ResultSet& results) {
  const RunConfig& cfg = results.config.config();
  const auto cells = aggregate_cells(results);
  std::ostringstream out;

  out << "fogbench report (csv schema " << kCsvSchemaVersion << ")\n";
  out << "seed: " << results.seed << "\n";
  out << "records: " << results.records.size() << " (failed: " << results.failure_count() << ")\n\n";

  out << "Configuration\n";
  out << "  repetitions: " << cfg.repetitions << "\n";
  out << "  modes: " << join(cfg.modes) << "\n";
  out << "  stress levels: " << join(cfg.stress_levels) << " (applied to " << to_string(cfg.stress_target)
      << " nodes)\n";
  out << "  user counts: " << join(cfg.user_counts) << "\n";
  out << "  cost rate per hour: " << general(cfg.cost_rate_per_hour) << "\n";
  switch (cfg.result_store.kind) {
    case ResultStoreSpec::Kind::Virtual:
      out << "  result store: virtual link, " << general(cfg.result_store.link.uplink_bandwidth) << " B/s, "
          << general(cfg.result_store.link.link_latency) << " s latency\n";
      break;
    case ResultStoreSpec::Kind::Directory:
      out << "  result store: directory " << cfg.result_store.directory.string() << "\n";
      break;
    case ResultStoreSpec::Kind::None:
      out << "  result store: none\n";
      break;
  }
  out << "  config hash: " << config_hash(cfg) << "\n";
  out << "  nodes:\n";
  for (const auto& n : cfg.nodes) {
    out << "    " << std::left << std::setw(12) << n.id << std::setw(7) << to_string(n.tier);
    if (n.is_virtual()) {
      const auto& p = n.virtual_params();
      out << "virtual speed=" << general(p.compute_speed) << " up=" << general(p.uplink_bandwidth)
          << " down=" << general(p.downlink_bandwidth) << " latency=" << general(p.link_latency)
          << " jitter=" << general(p.jitter_fraction) << " cores=" << p.core_count;
    } else {
      const auto& p = n.transport_params();
      out << "transport " << p.adapter << " " << p.address;
    }
    out << "\n";
  }
  out << "  workloads:\n";
  for (const auto& w : cfg.workloads) {
    std::string services;
    for (const auto& s : w.services) services += (services.empty() ? "" : ">") + s.name;
    out << "    " << std::left << std::setw(16) << w.name << "profile=" << to_string(w.profile)
        << " services=" << services << " assets=" << w.assets.size();
    if (auto it = w.labels.find("type"); it != w.labels.end()) out << " type=" << it->second;
    out << "\n";
  }
  out << std::right;

  out << "\nPlatform\n";
  if (results.platform.empty()) out << "  (not probed)\n";
  for (const auto& [id, m] : results.platform) {
    out << "  " << id << "\n";
    auto line = [&](const char* name, const std::string& value) {
      out << "    " << std::left << std::setw(16) << name << value << "\n" << std::right;
    };
    if (m.cpu_model) line("cpu model", *m.cpu_model);
    if (m.core_count) line("cores", std::to_string(*m.core_count));
    if (m.cpu_frequency) line("cpu frequency", general(*m.cpu_frequency) + " Hz");
    if (m.uptime) line("uptime", fixed(*m.uptime, 3) + " s");
    if (m.unzip_time) line("unzip time", fixed(*m.unzip_time) + " s");
    if (m.download_rate) line("download rate", general(*m.download_rate) + " B/s");
    if (m.io_read_rate) line("io read", general(*m.io_read_rate) + " B/s");
    if (m.io_write_rate) line("io write", general(*m.io_write_rate) + " B/s");
    for (const auto& missing : m.missing) line("missing", missing);
  }

  out << "\nCells (mean +/- sample stddev over successful records, seconds)\n";
  for (const auto& c : cells) {
    out << "  " << c.key.workload << " | " << to_string(c.key.mode) << " | " << c.key.placement.label() << " | "
        << to_string(c.key.stress) << " | users " << c.key.users << "\n";
    out << "    records " << c.records << ", failed " << c.failures << "\n";
    if (!c.metrics) continue;
    const auto& a = *c.metrics;
    if (!aggregate_identities_hold(a)) {
      throw std::logic_error("latency identities broken for " + c.key.workload + " " + c.key.placement.label());
    }
    out << "    RTT " << mean_sd(a.rtt) << "   CL " << mean_sd(a.communication_latency) << "\n";
    out << "    ET " << mean_sd(a.et) << "   T1 " << mean_sd(a.t1) << "   T3 " << mean_sd(a.t3) << "   T2 "
        << mean_sd(a.t2) << "   T4 " << fixed(a.t4.mean) << "\n";
    if (a.rtf) out << "    RTF " << mean_sd(*a.rtf) << "\n";
    if (cfg.cost_rate_per_hour > 0) out << "    cost " << fixed(a.cost.mean) << "\n";
  }

  out << "\nMode comparison (* = lowest mean RTT + T4)\n";
  for (const auto& g : compare_modes(cells)) {
    out << "  " << g.workload << ", stress " << to_string(g.stress) << ", users " << g.users << "\n";
    for (std::size_t i = 0; i < g.rows.size(); ++i) {
      const auto& r = g.rows[i];
      out << "  " << (i == g.best ? "* " : "  ") << std::left << std::setw(11) << to_string(r.mode) << std::right
          << " RTT " << fixed(r.rtt) << "  CL " << fixed(r.communication_latency) << "  RTT+T4 "
          << fixed(r.complete_computation_latency) << "  " << r.placement << "\n";
    }
  }

  const bool any_load = std::any_of(cells.begin(), cells.end(), [](const CellAggregate& c) { return c.load.has_value(); });
  if (any_load) {
    out << "\nConcurrent users\n";
    for (const auto& c : cells) {
      if (!c.load) continue;
      const auto& l = *c.load;
      out << "  " << c.key.workload << " | " << to_string(c.key.mode) << " | " << c.key.placement.label()
          << " | " << to_string(c.key.stress) << " | users " << c.key.users << "\n";
      out << "    samples " << l.throughput << " (ok " << l.success_count << ", failed " << l.fail_count
          << ")  avg response " << fixed(l.avg_response_time) << " +/- " << fixed(l.stddev_response_time)
          << "  avg latency " << fixed(l.avg_latency) << "  concurrency " << fixed(l.concurrency, 3) << "\n";
    }
  }

  if (results.failure_count() > 0) {
    out << "\nFailures\n";
    for (const auto& r : results.records) {
      if (r.success) continue;
      out << "  " << r.key.cell.workload << " | " << to_string(r.key.cell.mode) << " | "
          << r.key.cell.placement.label() << " | " << r.key.asset << " #" << r.key.repetition << ": " << r.error
          << "\n";
    }
  }
  return out.str();
}

void write_verbose(const ResultSet& results, const fs::path& path) {
  const std::string text = render_verbose(results);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("write failed for " + path.string());
}

std::string make_run_id(const RunConfig& config, std::chrono::system_clock::time_point when) {
  const std::time_t t = std::chrono::system_clock::to_time_t(when);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char stamp[32];
  std::strftime(stamp, sizeof stamp, "%Y%m%dT%H%M%SZ", &tm);
  return config_hash(config) + "-" + stamp;
}

ReportPaths write_reports(const ResultSet& results, const fs::path& dir, const std::string& run_id) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  ReportPaths p{dir / (run_id + ".csv"), dir / (run_id + "_agg.csv"), dir / (run_id + ".txt")};
  write_csv(results, p.csv);
  write_agg_csv(results, p.aggregate_csv);
  write_verbose(results, p.verbose);
  return p;
}

}  // namespace fogbench
