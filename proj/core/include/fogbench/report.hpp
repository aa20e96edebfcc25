#pragma once

#include <chrono>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fogbench/orchestrator.hpp"

namespace fogbench {

/// Bumped whenever the raw CSV columns change.
inline constexpr int kCsvSchemaVersion = 1;

/// Raw per-record columns, in order.
const std::vector<std::string>& csv_columns();

/// One row of the raw CSV; optional values are empty strings.
std::vector<std::string> csv_fields(const Record& record);

/// Throws IoError naming the path.
void write_csv(const ResultSet& results, const std::filesystem::path& path);

/// Reads a raw CSV back into records. The audio length behind rtf is not
/// stored, so timing.file_length is always empty. Throws IoError.
std::vector<Record> read_csv(const std::filesystem::path& path);

/// Inverse of ServicePlacement::label().
std::optional<ServicePlacement> parse_placement_label(std::string_view label);

struct CellAggregate {
  CellKey key;
  std::size_t records = 0;
  std::size_t failures = 0;
  std::optional<AggregateMetrics> metrics;  // over successful records
  std::optional<LoadSummary> load;          // field means over records with load data
};

/// Cells in first-seen record order.
std::vector<CellAggregate> aggregate_cells(const ResultSet& results);

struct ModeRow {
  DeploymentMode mode = DeploymentMode::CloudOnly;
  std::string placement;  // label of the mode's best placement
  double rtt = 0.0;
  double communication_latency = 0.0;
  double complete_computation_latency = 0.0;
};

/// Fastest placement of each mode for one workload at one stress level and
/// user count. `best` indexes the row with the lowest mean complete
/// computation latency (RTT plus offload).
struct ModeComparison {
  std::string workload;
  StressLevel stress = StressLevel::None;
  int users = 1;
  std::vector<ModeRow> rows;
  std::size_t best = 0;
};

std::vector<ModeComparison> compare_modes(const std::vector<CellAggregate>& cells);

void write_agg_csv(const ResultSet& results, const std::filesystem::path& path);

/// Human-readable report; no timestamps, so equal results render equal text.
/// Throws std::logic_error if an aggregate breaks the latency identities.
std::string render_verbose(const ResultSet& results);
void write_verbose(const ResultSet& results, const std::filesystem::path& path);

/// `<config hash>-<UTC timestamp>`.
std::string make_run_id(const RunConfig& config,
                        std::chrono::system_clock::time_point when = std::chrono::system_clock::now());

struct ReportPaths {
  std::filesystem::path csv;
  std::filesystem::path aggregate_csv;
  std::filesystem::path verbose;
};

/// Writes `<run_id>.csv`, `<run_id>_agg.csv` and `<run_id>.txt` under `dir`.
ReportPaths write_reports(const ResultSet& results, const std::filesystem::path& dir, const std::string& run_id);

}  // namespace fogbench
