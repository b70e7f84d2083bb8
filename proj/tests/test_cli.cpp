#include <gtest/gtest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>
#include <kdof/kdof.hpp>

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string cli_path() {
#ifdef KDOF_CLI_PATH
  if (fs::exists(KDOF_CLI_PATH)) return KDOF_CLI_PATH;
#endif
  const char* p = std::getenv("KDOF_CLI_PATH");
  if (p == nullptr || !fs::exists(p)) {
    ADD_FAILURE() << "KDOF_CLI_PATH not set or missing";
    return "";
  }
  return p;
}

struct RunResult {
  int code = -1;
  std::string output;
};

RunResult run_cli(const std::string& args) {
  RunResult r;
  const std::string cmd = cli_path() + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) {
    ADD_FAILURE() << "popen failed";
    return r;
  }
  char buf[256];
  while (fgets(buf, sizeof buf, pipe) != nullptr) r.output += buf;
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// data rows only, comment lines and the column header stripped
std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::stringstream ss(text);
  std::string line;
  bool header_seen = false;
  while (std::getline(ss, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      header_seen = true;
      continue;
    }
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(std::move(cells));
  }
  return rows;
}

class Workdir {
 public:
  Workdir() {
    dir_ = fs::temp_directory_path() / ("kdof_cli_test_" + std::to_string(counter_++));
    fs::create_directories(dir_);
  }
  ~Workdir() {
    std::error_code ec;
    fs::remove_all(dir_, ec);
  }
  fs::path operator/(const std::string& name) const { return dir_ / name; }

 private:
  fs::path dir_;
  static inline int counter_ = 0;
};

TEST(CliWidths, DiagonalRowsFromJsonInput) {
  Workdir wd;
  Eigen::VectorXd d(3);
  d << 3.0, 2.0, 1.0;
  kdof::save_operator_json(kdof::make_diagonal(d), (wd / "op.json").string());

  const fs::path out = wd / "w.csv";
  RunResult r = run_cli("widths --input " + (wd / "op.json").string() + " --k 4 --out " +
                        out.string());
  EXPECT_EQ(r.code, 0) << r.output;

  auto rows = csv_rows(read_file(out));
  ASSERT_EQ(rows.size(), 4u);
  const double expect[4] = {3.0, 2.0, 1.0, 0.0};
  for (int n = 0; n < 4; ++n) {
    EXPECT_EQ(rows[n][0], std::to_string(n + 1));
    EXPECT_NEAR(std::stod(rows[n][1]), expect[n], 1e-9);
    EXPECT_NEAR(std::stod(rows[n][2]), expect[n], 1e-9);
    EXPECT_EQ(rows[n][4], "1");
  }

  // the json twin carries the same rows plus the resolved config
  json twin = json::parse(read_file(wd / "w.json"));
  EXPECT_EQ(twin.at("command"), "widths");
  EXPECT_EQ(twin.at("widths").size(), 4u);
  EXPECT_TRUE(twin.at("config").contains("seed"));
  EXPECT_EQ(twin.at("config").at("k"), 4);
}

TEST(CliWidths, PolyhedralDomainBracketsOracleValue) {
  Workdir wd;
  const fs::path out = wd / "w.csv";
  RunResult r = run_cli("widths --channel kind=diagonal,values=3:2:1 --domain-norm p1 --k 2 --out " +
                        out.string());
  EXPECT_EQ(r.code, 0) << r.output;
  auto rows = csv_rows(read_file(out));
  ASSERT_EQ(rows.size(), 2u);
  const double d2 = 6.0 / std::sqrt(13.0);
  EXPECT_NEAR(std::stod(rows[1][2]), d2, 1e-4);
  EXPECT_LE(std::stod(rows[1][1]), d2 + 1e-9);
  EXPECT_GE(std::stod(rows[1][3]), d2 - 1e-9);
}

TEST(CliDof, GridCountsAndJumps) {
  Workdir wd;
  const fs::path out = wd / "d.csv";
  RunResult r = run_cli(
      "dof --channel kind=diagonal,values=3:2:1 --eps-grid 0.5:3.5:4 --out " + out.string());
  EXPECT_EQ(r.code, 0) << r.output;

  auto rows = csv_rows(read_file(out));
  std::vector<double> jump_values;
  std::vector<int> counts;
  for (const auto& row : rows) {
    if (row[0] == "jump") jump_values.push_back(std::stod(row[2]));
    if (row[0] == "level") counts.push_back(std::stoi(row[2]));
  }
  ASSERT_EQ(jump_values.size(), 3u);
  EXPECT_NEAR(jump_values[0], 3.0, 1e-9);
  EXPECT_NEAR(jump_values[1], 2.0, 1e-9);
  EXPECT_NEAR(jump_values[2], 1.0, 1e-9);
  EXPECT_EQ(counts, (std::vector<int>{3, 2, 1, 0}));
}

TEST(CliDof, IndeterminateLevelExitsTwo) {
  Workdir wd;
  const fs::path out = wd / "d.csv";
  RunResult r = run_cli(
      "dof --channel kind=diagonal,values=5:4:3:2:1 --domain-norm p1 --eps 2.5 --k 1 --out " +
      out.string());
  EXPECT_EQ(r.code, 2) << r.output;

  json twin = json::parse(read_file(wd / "d.json"));
  ASSERT_EQ(twin.at("levels").size(), 1u);
  const json& level = twin.at("levels").at(0);
  EXPECT_TRUE(level.at("indeterminate").get<bool>());
  EXPECT_EQ(level.at("count_low"), 1);
  EXPECT_EQ(level.at("count_high"), 2);
  EXPECT_TRUE(twin.at("indeterminate_levels").get<bool>());
}

TEST(CliLadder, DiagonalRungsAndConvergence) {
  Workdir wd;
  const fs::path out = wd / "l.csv";
  RunResult r = run_cli(
      "ladder --channel kind=diagonal,values=0.5:0.25:0.125:0.0625 --n 2 --ms 1:2:3:4 --out " +
      out.string());
  EXPECT_EQ(r.code, 0) << r.output;

  auto rows = csv_rows(read_file(out));
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(std::stod(rows[0][1]), 0.0);
  for (int i = 1; i < 4; ++i) EXPECT_EQ(std::stod(rows[i][1]), 0.25);

  json twin = json::parse(read_file(wd / "l.json"));
  EXPECT_TRUE(twin.at("violations").empty());
  EXPECT_EQ(twin.at("convergence").at("certified_rungs"), 4);
  EXPECT_EQ(twin.at("convergence").at("estimate"), 0.25);
}

TEST(CliAxioms, SmallSelftestPasses) {
  Workdir wd;
  const fs::path out = wd / "a.csv";
  RunResult r = run_cli("axioms --p2-instances 2 --mixed-instances 0 --seed 11 --out " +
                        out.string());
  EXPECT_EQ(r.code, 0) << r.output;

  json twin = json::parse(read_file(wd / "a.json"));
  EXPECT_EQ(twin.at("reports").size(), 10u);
  EXPECT_EQ(twin.at("summary").at("fail"), 0);
  EXPECT_EQ(twin.at("summary").at("pass").get<int>() +
                twin.at("summary").at("out_of_scope").get<int>() +
                twin.at("summary").at("inconclusive").get<int>(),
            10);
}

TEST(CliDeterminism, ByteIdenticalAcrossRunsAndThreads) {
  Workdir wd;
  const fs::path out = wd / "r.csv";
  const std::string base =
      "widths --channel kind=random-gaussian,rows=3,cols=3 --domain-norm p1 --k 2 --seed 42 "
      "--out " + out.string();

  ASSERT_EQ(run_cli(base + " --threads 1").code, 0);
  const std::string csv1 = read_file(out);
  const std::string json1 = read_file(wd / "r.json");

  ASSERT_EQ(run_cli(base + " --threads 4").code, 0);
  EXPECT_EQ(read_file(out), csv1);
  EXPECT_EQ(read_file(wd / "r.json"), json1);

  ASSERT_EQ(run_cli(base + " --threads 2").code, 0);
  EXPECT_EQ(read_file(out), csv1);

  ASSERT_EQ(run_cli(base + " --threads 1").code, 0);
  EXPECT_EQ(read_file(out), csv1);
}

TEST(CliErrors, AtomicOutputsAndExitCodes) {
  Workdir wd;
  const fs::path bad = wd / "bad.txt";
  {
    std::ofstream f(bad);
    f << "not a matrix {{{\n";
  }
  const fs::path out = wd / "never.csv";
  RunResult r = run_cli("widths --input " + bad.string() + " --out " + out.string());
  EXPECT_EQ(r.code, 1);
  EXPECT_FALSE(fs::exists(out)) << "failed run must not leave a report";
  EXPECT_FALSE(fs::exists(out.string() + ".tmp")) << "failed run must not leave temp files";

  EXPECT_EQ(run_cli("widths --channel kind=bogus,x=1 --out " + out.string()).code, 1);
  EXPECT_EQ(run_cli("widths --channel kind=diagonal --out " + out.string()).code, 1);
  EXPECT_EQ(run_cli("widths --channel kind=diagonal,values=1:2,extra=9 --out " +
                    out.string()).code, 1);
  EXPECT_EQ(run_cli("widths --input " + bad.string() +
                    " --channel kind=diagonal,values=1 --out " + out.string()).code, 1);
  EXPECT_EQ(run_cli("widths --channel kind=diagonal,values=1:2").code, 1);  // no --out
  EXPECT_EQ(run_cli("dof --channel kind=diagonal,values=1:2 --out " + out.string()).code, 1);
  EXPECT_EQ(run_cli("ladder --channel kind=timefreq-limiter,size=4,w=0.1 --ms 1:2 --out " +
                    out.string()).code, 1);
  EXPECT_EQ(run_cli("--help").code, 0);
  EXPECT_EQ(run_cli("--version").code, 0);
}

TEST(CliFormat, JsonOnlyOutput) {
  Workdir wd;
  const fs::path out = wd / "solo.json";
  RunResult r = run_cli("widths --channel kind=diagonal,values=2:1 --format json --out " +
                        out.string());
  EXPECT_EQ(r.code, 0) << r.output;
  json doc = json::parse(read_file(out));
  EXPECT_EQ(doc.at("config").at("format"), "json");
  EXPECT_EQ(doc.at("widths").size(), 2u);
  EXPECT_FALSE(fs::exists(wd / "solo.json.json"));
}

}  // namespace
