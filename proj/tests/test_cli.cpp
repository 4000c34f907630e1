#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "qlab/json_io.hpp"

namespace fs = std::filesystem;
using qlab::io::json;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

std::string quote(const std::string& s) {
  std::string q = "'";
  for (char c : s) {
    if (c == '\'') {
      q += "'\\''";
    } else {
      q += c;
    }
  }
  return q + "'";
}

Run cli(const std::string& args) {
  const std::string cmd = std::string(QLAB_CLI_PATH) + " " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("qlab_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string out_dir() const { return quote(dir_.string()); }
  fs::path dir_;
};

}  // namespace

TEST_F(Cli, EvalExamples) {
  auto r = cli("eval --gauge " + quote(R"({"kind":"lp","p":0.5})") + " --field '[1,1]'");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "4.0 EXACT\n");
  r = cli("eval --gauge " + quote(R"({"kind":"weak_l1"})") + " --field '[1,0.5]'");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "1.0 EXACT\n");
  r = cli("eval --gauge " + quote(R"({"kind":"orlicz","phi":"loglog"})") + " --field '[1,1]'");
  EXPECT_EQ(r.code, 0);
  const double v = std::stod(r.out);
  const double t = qlab::eval_gauge(qlab::Gauge::orlicz(qlab::OrliczFunction::loglog()),
                                    qlab::MeasureSpace::counting(2), {1.0, 1.0})
                       .value;
  EXPECT_NEAR(v, t, 1e-12 * t);
}

TEST_F(Cli, EvalReadsFiles) {
  std::ofstream(dir_ / "g.json") << R"({"kind":"lp","p":1})";
  std::ofstream(dir_ / "s.json") << R"({"weights":[0.5,2]})";
  const auto r = cli("eval --gauge " + quote((dir_ / "g.json").string()) + " --space " +
                     quote((dir_ / "s.json").string()) + " --field '[2,1]'");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "3.0 EXACT\n");
}

TEST_F(Cli, MalformedInputExitsTwo) {
  EXPECT_EQ(cli("eval --gauge '{\"kind\":' --field '[1]'").code, 2);
  EXPECT_EQ(cli("eval --gauge " + quote(R"({"kind":"lp","p":1})") + " --field '[-1]'").code, 2);
  EXPECT_EQ(cli("eval --gauge " + quote((dir_ / "missing.json").string()) + " --field '[1]'").code, 2);
  EXPECT_EQ(cli("--bogus").code, 2);
  EXPECT_EQ(cli("suite nope").code, 2);
}

TEST_F(Cli, SuiteExitCodesAndOutputFiles) {
  auto r = cli("--out " + out_dir() + " suite leveling");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("leveling: PASS"), std::string::npos);
  const auto report = json::parse(slurp(dir_ / "leveling.json"));
  EXPECT_TRUE(report["passed"].get<bool>());
  r = cli("--out " + out_dir() + " suite mii --outer " + quote(R"({"kind":"lp","p":1})") + " --inner " +
          quote(R"({"kind":"lp","p":2})"));
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("mii: FAIL"), std::string::npos);
  const auto mii = json::parse(slurp(dir_ / "mii.json"));
  EXPECT_TRUE(mii["checks"][0].contains("witness"));
}

TEST_F(Cli, CounterexampleCsv) {
  const auto r = cli("--out " + out_dir() + " --format csv suite counterexample --max-n 1024");
  EXPECT_EQ(r.code, 0);
  const auto rows = qlab::io::parse_csv(slurp(dir_ / "counterexample.csv"));
  ASSERT_EQ(rows.size(), 12u);
  const auto table = qlab::io::csv_to_table(rows);
  const auto& cols = table["columns"];
  std::size_t n_col = 0, ratio_col = 0;
  for (std::size_t k = 0; k < cols.size(); ++k) {
    if (cols[k] == "n") n_col = k;
    if (cols[k] == "ratio") ratio_col = k;
  }
  for (const auto& row : table["rows"]) {
    const double n = row[n_col].get<double>();
    EXPECT_NEAR(row[ratio_col].get<double>(), n, 1e-12 * n);
  }
}

TEST_F(Cli, ReportMergesSections) {
  ASSERT_EQ(cli("--out " + out_dir() + " suite leveling").code, 0);
  ASSERT_EQ(cli("--out " + out_dir() + " --format csv suite counterexample --max-n 16").code, 0);
  const auto merged_dir = dir_ / "merged";
  const auto r = cli("--out " + quote(merged_dir.string()) + " report " + quote((dir_ / "leveling.json").string()) +
                     " " + quote((dir_ / "counterexample.csv").string()));
  EXPECT_EQ(r.code, 0);
  const auto merged = json::parse(slurp(merged_dir / "report.json"));
  EXPECT_TRUE(merged["sections"].contains("leveling"));
  EXPECT_TRUE(merged["sections"].contains("counterexample"));
  EXPECT_EQ(merged["sections"]["counterexample"]["rows"].size(), 5u);
  EXPECT_EQ(cli("report").code, 2);
  EXPECT_EQ(cli("report " + quote((dir_ / "absent.json").string())).code, 2);
}

TEST_F(Cli, CsvRoundTripsThroughJson) {
  ASSERT_EQ(cli("--out " + out_dir() + " --format csv suite counterexample --max-n 64").code, 0);
  const std::string csv = slurp(dir_ / "counterexample.csv");
  const auto again = dir_ / "again";
  ASSERT_EQ(cli("--out " + quote(again.string()) + " --format csv report " +
                quote((dir_ / "counterexample.csv").string()))
                .code,
            0);
  EXPECT_EQ(slurp(again / "report.csv"), csv);
}

TEST_F(Cli, ByteIdenticalForAFixedSeed) {
  const auto a = dir_ / "a", b = dir_ / "b";
  ASSERT_EQ(cli("--seed 9 --out " + quote(a.string()) + " suite amenability").code, 0);
  ASSERT_EQ(cli("--seed 9 --out " + quote(b.string()) + " suite amenability").code, 0);
  const std::string x = slurp(a / "amenability.json");
  EXPECT_FALSE(x.empty());
  EXPECT_EQ(x, slurp(b / "amenability.json"));
}

TEST_F(Cli, NumericSubcommands) {
  auto r = cli("rolewicz --p 0.5 --n 16");
  ASSERT_EQ(r.code, 0);
  EXPECT_NEAR(json::parse(r.out)["ratio"].get<double>(), 16.0, 1e-12);
  r = cli("mii --outer " + quote(R"({"kind":"lp","p":2})") + " --inner " + quote(R"({"kind":"lp","p":1})") +
          " --matrix '[[1,0],[0,1]]'");
  ASSERT_EQ(r.code, 0);
  EXPECT_NEAR(json::parse(r.out)["ratio"].get<double>(), std::sqrt(2.0) / 2.0, 1e-15);
  r = cli("galb-estimate --X " + quote(R"({"dim":3,"norm":{"kind":"lq","q":0.5}})") + " --a '[1,1,1]'");
  ASSERT_EQ(r.code, 0);
  EXPECT_NEAR(json::parse(r.out)["value"].get<double>(), 9.0, 1e-12);
  r = cli("envelope --gauge " + quote(R"({"kind":"lp","p":0.5})") + " --p 1 --field '[1,1]'");
  ASSERT_EQ(r.code, 0);
  EXPECT_NEAR(json::parse(r.out)["value"].get<double>(), 2.0, 1e-9);
  r = cli("dual --gauge " + quote(R"({"kind":"lp","p":1})") + " --field '[1,3]'");
  ASSERT_EQ(r.code, 0);
  EXPECT_NEAR(json::parse(r.out)["value"].get<double>(), 3.0, 1e-12);
  r = cli("tensor-norm --rep " +
          quote(R"({"lambda":{"kind":"lp","p":1},"X":{"dim":2,"norm":{"kind":"lq","q":2}},"terms":[{"x":[3,4],"f":[1,1]}]})"));
  ASSERT_EQ(r.code, 0);
  EXPECT_NEAR(json::parse(r.out)["value"].get<double>(), 10.0, 1e-12);
  r = cli("ftc --grid '{\"d\":1,\"cells\":64}'");
  ASSERT_EQ(r.code, 0);
  EXPECT_FALSE(json::parse(r.out).empty());
}
