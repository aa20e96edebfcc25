#include <gtest/gtest.h>

#include <fstream>
#include <regex>
#include <sstream>

#include "fogbench/csv.hpp"
#include "fogbench/report.hpp"
#include "fogbench/workloads.hpp"
#include "test_support.hpp"

using namespace fogbench;

namespace {

ResultSet small_run(std::vector<int> users = {1}) {
  auto cfg = default_run_config();
  cfg.workloads = {make_profile(Profile::SphinxLike), make_profile(Profile::RealfdLike)};
  cfg.modes = {DeploymentMode::CloudOnly, DeploymentMode::EdgeOnly, DeploymentMode::CloudEdge};
  cfg.repetitions = 3;
  cfg.user_counts = std::move(users);
  cfg.load.requests_per_user = 2;
  cfg.cost_rate_per_hour = 0.0944;
  return run_benchmark(validate_run_config(cfg));
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(Csv, EscapeAndParse) {
  EXPECT_EQ(csv_escape("plain"), "plain");
  EXPECT_EQ(csv_escape("a,b"), "\"a,b\"");
  EXPECT_EQ(csv_escape("say \"hi\""), "\"say \"\"hi\"\"\"");
  std::stringstream ss;
  write_csv_row(ss, {"x", "a,b", "line\nbreak", ""});
  write_csv_row(ss, {"2"});
  const auto rows = parse_csv(ss);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"x", "a,b", "line\nbreak", ""}));
  std::stringstream bad("\"open");
  EXPECT_THROW(parse_csv(bad), IoError);
}

TEST(Csv, NumbersRoundTrip) {
  for (double v : {0.0, 0.1, 1.0 / 3.0, 6.02e23, 5e-324, 123456789.125}) {
    EXPECT_EQ(parse_number(format_number(v)), v);
  }
  EXPECT_THROW(parse_number("1.5x"), IoError);
  EXPECT_THROW(parse_unsigned("-1"), IoError);
}

TEST(Report, PlacementLabelInverse) {
  const auto w = make_profile(Profile::RealfdLike);
  std::vector<ServicePlacement> all = placements_for_mode(w, DeploymentMode::CloudEdge, "c", "e");
  all.push_back(full_offload_placement(w, "c", "e"));
  all.push_back(placements_for_mode(w, DeploymentMode::CloudOnly, "c", "e")[0]);
  for (const auto& p : all) EXPECT_EQ(parse_placement_label(p.label()), p);
  EXPECT_FALSE(parse_placement_label(""));
  EXPECT_FALSE(parse_placement_label("GSC"));
  EXPECT_FALSE(parse_placement_label("GSC@e|elsewhere"));
}

TEST(Report, CsvRoundTrip) {
  const auto rs = small_run({1, 3});
  const auto dir = test::scratch_dir("csv");
  write_csv(rs, dir / "r.csv");
  const auto back = read_csv(dir / "r.csv");
  ASSERT_EQ(back.size(), rs.records.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    const auto& a = rs.records[i];
    const auto& b = back[i];
    EXPECT_EQ(b.key, a.key);
    auto t = a.timing;
    t.file_length.reset();
    EXPECT_EQ(b.timing, t);
    EXPECT_EQ(b.metrics, a.metrics);
    EXPECT_EQ(b.load, a.load);
    EXPECT_EQ(b.success, a.success);
  }
}

TEST(Report, CsvHeaderAndWidth) {
  const auto rs = small_run();
  const auto dir = test::scratch_dir("csv-width");
  write_csv(rs, dir / "r.csv");
  std::ifstream in(dir / "r.csv");
  const auto rows = parse_csv(in);
  ASSERT_EQ(rows.size(), rs.records.size() + 1);
  EXPECT_EQ(rows[0], csv_columns());
  for (const auto& r : rows) EXPECT_EQ(r.size(), csv_columns().size());
}

TEST(Report, AggregatesPerCell) {
  const auto rs = small_run();
  const auto cells = aggregate_cells(rs);
  // sphinx: 1 + 1 + 1 placements, realfd: 1 + 1 + 3
  ASSERT_EQ(cells.size(), 8u);
  for (const auto& c : cells) {
    EXPECT_EQ(c.records, 3u);
    ASSERT_TRUE(c.metrics);
    EXPECT_EQ(c.metrics->repetition_count, 3u);
    EXPECT_TRUE(aggregate_identities_hold(*c.metrics));
  }
  EXPECT_TRUE(cells[0].metrics->rtf.has_value());
  EXPECT_FALSE(cells[3].metrics->rtf.has_value());
}

TEST(Report, ModeComparisonPicksFastest) {
  const auto rs = small_run();
  const auto groups = compare_modes(aggregate_cells(rs));
  ASSERT_EQ(groups.size(), 2u);
  for (const auto& g : groups) {
    ASSERT_EQ(g.rows.size(), 3u);
    for (const auto& r : g.rows) {
      EXPECT_LE(g.rows[g.best].complete_computation_latency, r.complete_computation_latency);
    }
  }
}

TEST(Report, VerboseSections) {
  const auto single = render_verbose(small_run());
  EXPECT_NE(single.find("Configuration"), std::string::npos);
  EXPECT_NE(single.find("Platform"), std::string::npos);
  EXPECT_NE(single.find("Mode comparison"), std::string::npos);
  EXPECT_NE(single.find("+/-"), std::string::npos);
  EXPECT_EQ(single.find("Concurrent users"), std::string::npos);
  EXPECT_EQ(single.find("Failures"), std::string::npos);
  for (char c : single) EXPECT_LT(static_cast<unsigned char>(c), 0x80) << "report is ASCII";

  EXPECT_EQ(render_verbose(small_run()), single) << "no timestamps";
  EXPECT_NE(render_verbose(small_run({1, 4})).find("Concurrent users"), std::string::npos);
}

TEST(Report, VerboseListsFailures) {
  auto rs = small_run();
  rs.records[0].success = false;
  rs.records[0].error = "exploded";
  const auto text = render_verbose(rs);
  EXPECT_NE(text.find("Failures"), std::string::npos);
  EXPECT_NE(text.find("exploded"), std::string::npos);
}

TEST(Report, WriteReports) {
  const auto rs = small_run();
  const auto dir = test::scratch_dir("reports") / "nested";
  const auto id = make_run_id(rs.config.config());
  EXPECT_TRUE(std::regex_match(id, std::regex("[0-9a-f]{16}-[0-9]{8}T[0-9]{6}Z")));
  const auto paths = write_reports(rs, dir, id);
  for (const auto& p : {paths.csv, paths.aggregate_csv, paths.verbose}) EXPECT_TRUE(std::filesystem::exists(p));
  EXPECT_EQ(slurp(paths.verbose), render_verbose(rs));
  std::ifstream agg(paths.aggregate_csv);
  EXPECT_EQ(parse_csv(agg).size(), 9u);
}
