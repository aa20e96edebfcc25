#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "fogbench_cli/cli.hpp"
#include "test_support.hpp"

using namespace fogbench;

namespace {

struct Outcome {
  int code;
  std::string out, err;
};

Outcome run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "fogbench");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string config(const std::string& name) { return std::string(FOGBENCH_CONFIG_DIR) + "/" + name; }

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string path_after(const std::string& out, const std::string& tag) {
  const auto at = out.find(tag + ": ");
  if (at == std::string::npos) return {};
  const auto start = at + tag.size() + 2;
  return out.substr(start, out.find('\n', start) - start);
}

}  // namespace

TEST(Cli, HelpMatchesGolden) {
  const auto r = run_cli({"--help"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, slurp(std::string(FOGBENCH_TEST_DATA_DIR) + "/help.golden"));
  for (const char* flag : {"--plugin", "--node", "--seed", "--out", "--modes", "--repetitions"}) {
    EXPECT_NE(r.out.find(flag), std::string::npos) << flag;
  }
}

TEST(Cli, SubcommandHelp) {
  const auto r = run_cli({"run", "--help"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("--repetitions"), std::string::npos);
}

TEST(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(run_cli({}).code, 2);
  EXPECT_EQ(run_cli({"frobnicate"}).code, 2);
  EXPECT_EQ(run_cli({"run"}).code, 2);
  EXPECT_EQ(run_cli({"run", config("three-assets.json"), "--repetitions", "0"}).code, 2);
  EXPECT_EQ(run_cli({"run", config("three-assets.json"), "--seed", "seven"}).code, 2);
  EXPECT_EQ(run_cli({"run", config("three-assets.json"), "--modes", "sideways"}).code, 2);
}

TEST(Cli, ValidateFoglampCloudEdge) {
  const auto r = run_cli({"validate", config("foglamp-cloud-edge.invalid.json")});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("never runs in CloudEdge mode"), std::string::npos) << r.err;
}

TEST(Cli, ValidateGoodConfig) {
  const auto r = run_cli({"validate", config("desk-suite.json")});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("ok"), std::string::npos);
  EXPECT_EQ(run_cli({"validate", "/nonexistent/config.json"}).code, 1);
}

TEST(Cli, ListWorkloadsWithPlugin) {
  const auto plain = run_cli({"list-workloads"});
  EXPECT_EQ(plain.code, 0);
  EXPECT_NE(plain.out.find("realfd-like"), std::string::npos);
  EXPECT_EQ(plain.out.find("echo-plugin"), std::string::npos);
  const auto with = run_cli({"--plugin", std::string(FOGBENCH_TEST_DATA_DIR) + "/echo-plugin.json", "list-workloads"});
  EXPECT_EQ(with.code, 0) << with.err;
  EXPECT_NE(with.out.find("echo-plugin     plugin"), std::string::npos) << with.out;
}

TEST(Cli, Probe) {
  const auto r = run_cli({"probe", config("desk-suite.json"), "--node", "edge-1"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("core_count     4"), std::string::npos) << r.out;
  EXPECT_EQ(run_cli({"probe", config("desk-suite.json"), "--node", "mars-1"}).code, 1);
}

TEST(Cli, RunRepetitionOverride) {
  const auto dir = test::scratch_dir("cli-reps");
  const auto r = run_cli({"run", config("three-assets.json"), "--repetitions", "1", "--out", dir.string()});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find(": 3 records, 0 failed"), std::string::npos) << r.out;
  const auto csv = path_after(r.out, "csv");
  ASSERT_FALSE(csv.empty());
  std::ifstream in(csv);
  std::string line;
  int lines = 0;
  while (std::getline(in, line)) ++lines;
  EXPECT_EQ(lines, 4);
}

TEST(Cli, ModesOverride) {
  const auto dir = test::scratch_dir("cli-modes");
  const auto r = run_cli({"run", config("desk-suite.json"), "--modes", "edge-only", "--repetitions", "1", "--out",
                          dir.string()});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("seed 7: 5 records"), std::string::npos) << r.out;
  EXPECT_EQ(r.out.find("cloud-only"), std::string::npos);
  EXPECT_NE(slurp(path_after(r.out, "report")).find("repetitions: 1"), std::string::npos);
}

TEST(Cli, SeedSevenTwiceIsByteIdentical) {
  const auto a = test::scratch_dir("cli-seed-a");
  const auto b = test::scratch_dir("cli-seed-b");
  const auto ra = run_cli({"run", config("desk-suite.json"), "--seed", "7", "--out", a.string()});
  const auto rb = run_cli({"run", config("desk-suite.json"), "--seed", "7", "--out", b.string()});
  ASSERT_EQ(ra.code, 0);
  ASSERT_EQ(rb.code, 0);
  for (const char* tag : {"csv", "aggregate", "report"}) {
    EXPECT_EQ(slurp(path_after(ra.out, tag)), slurp(path_after(rb.out, tag))) << tag;
  }
  const auto rc = run_cli({"run", config("desk-suite.json"), "--seed", "8", "--out", b.string()});
  EXPECT_NE(slurp(path_after(ra.out, "csv")), slurp(path_after(rc.out, "csv")));
}

TEST(Cli, OutDirFromEnvironment) {
  const auto dir = test::scratch_dir("cli-env");
  ::setenv(cli::kOutDirEnv, dir.string().c_str(), 1);
  const auto r = run_cli({"run", config("desk-suite.json"), "--modes", "cloud-only", "--repetitions", "1"});
  ::unsetenv(cli::kOutDirEnv);
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(std::filesystem::path(path_after(r.out, "csv")).parent_path(), dir);
}
