#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("grushin_cli_test_" + name);
  fs::remove_all(p);
  return p;
}

int run(const std::string& args) {
  const std::string cmd = std::string(GRUSHIN_CLI) + " " + args + " > /dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

json read_json(const fs::path& p) {
  std::ifstream in(p);
  json j;
  in >> j;
  return j;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

int data_rows(const fs::path& csv) {
  std::ifstream in(csv);
  std::string line;
  int n = -1;
  while (std::getline(in, line)) ++n;
  return n;
}

}  // namespace

TEST(Cli, EigWritesTable) {
  const fs::path out = scratch("eig");
  ASSERT_EQ(run("eig --n-max 30 --out " + out.string()), 0);
  EXPECT_EQ(data_rows(out / "spectral.csv"), 30);
  const json m = read_json(out / "manifest.json");
  EXPECT_EQ(m["command"], "eig");
  for (const auto& f : m["files"]) EXPECT_TRUE(fs::exists(f.get<std::string>())) << f;
  EXPECT_TRUE(m.contains("versions"));
  EXPECT_TRUE(m.contains("wall_time_s"));
  fs::remove_all(out);
}

TEST(Cli, MinTimeBracketsCriticalTime) {
  const fs::path out = scratch("min_time");
  ASSERT_EQ(run("min-time --region two-strips --a 0.5 --nx 401 --ny 63 --T 0.02:0.02:0.30 --N 10,20,30 --out " +
                out.string()),
            0);
  const json s = read_json(out / "min-time.json");
  EXPECT_TRUE(s["brackets_critical_time"].get<bool>());
  EXPECT_DOUBLE_EQ(s["critical_time"].get<double>(), 0.125);
  EXPECT_EQ(data_rows(out / "min_time.csv"), 15 * 3);
  fs::remove_all(out);
}

TEST(Cli, RungeRatioGrowsTenfold) {
  const fs::path out = scratch("runge");
  ASSERT_EQ(run("runge --y0 1.5708 --delta 0.2 --a-prime 0.6 --eps 0.05 --T 0.1 --out " + out.string()), 0);
  const json s = read_json(out / "runge.json");
  EXPECT_GE(s["final_ratio_over_initial"].get<double>(), 10.0);
  EXPECT_TRUE(s["tenfold"].get<bool>());
  EXPECT_GT(data_rows(out / "runge.csv"), 1);
  EXPECT_TRUE(fs::exists(out / "U_samples.csv"));
  fs::remove_all(out);
}

TEST(Cli, ExitCodes) {
  const fs::path out = scratch("codes");
  EXPECT_EQ(run("eig --n-max 0 --out " + out.string()), 2);
  EXPECT_EQ(run("obs-cost --nx 40 --out " + out.string()), 2);
  EXPECT_EQ(run("eig --no-such-flag"), 2);
  EXPECT_EQ(run("eig --config /nonexistent.json --out " + out.string()), 2);
  // A tube of radius 0.1 on a grid with spacing 0.1 cannot carry the cutoff.
  EXPECT_EQ(run("cutoff --path vertical --path-a 0 --eps 0.1 --nx 19 --ny 31 --out " + out.string()), 3);
  // No admissible pole once T passes (1 - 2 eps) a'^2 / 2.
  EXPECT_EQ(run("runge --T 0.5 --kmax 1 --out " + out.string()), 2);
  fs::remove_all(out);
}

TEST(Cli, ConfigPrecedence) {
  const fs::path out = scratch("config");
  fs::create_directories(out);
  const fs::path cfg = out / "cfg.json";
  std::ofstream(cfg) << R"({"n-max": 7, "eig": {"eps": 0.2}, "obs-cost": {"T": 0.4}})";
  ASSERT_EQ(run("eig --config " + cfg.string() + " --out " + out.string()), 0);
  EXPECT_EQ(data_rows(out / "spectral.csv"), 7);
  json m = read_json(out / "manifest.json");
  EXPECT_DOUBLE_EQ(m["config"]["eps"].get<double>(), 0.2);
  ASSERT_EQ(run("eig --n-max 4 --config " + cfg.string() + " --out " + out.string()), 0);
  EXPECT_EQ(data_rows(out / "spectral.csv"), 4);
  fs::remove_all(out);
}

TEST(Cli, OutputsAreDeterministic) {
  const fs::path a = scratch("det_a"), b = scratch("det_b");
  const std::string args = "hum --region two-strips --a 0.5 --nx 101 --ny 31 --T 0.3 --N 6 --f0 random --seed 5 --out ";
  ASSERT_EQ(run(args + a.string()), 0);
  ASSERT_EQ(run(args + b.string()), 0);
  for (const char* f : {"f0.bin", "fT.bin", "control_t0.bin", "hum.json"})
    EXPECT_EQ(slurp(a / f), slurp(b / f)) << f;
  const json m = read_json(a / "manifest.json");
  EXPECT_EQ(m["seed"], 5);
  EXPECT_EQ(m["files"].size(), 5u);
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST(Cli, RegionAndCutoffImages) {
  const fs::path out = scratch("images");
  ASSERT_EQ(run("region --region rectangle-complement --half-w 0.6 --yc 1 --half-h 0.1 --y0 1 --nx 201 --ny 101 --out " +
                out.string()),
            0);
  const json r = read_json(out / "region.json");
  EXPECT_NEAR(r["segment_clearance"].get<double>(), 0.6, 0.01);
  EXPECT_EQ(slurp(out / "region.pgm").substr(0, 2), "P5");
  ASSERT_EQ(run("cutoff --path sketch --path-a 0.488 --eps 0.15 --nx 201 --ny 201 --out " + out.string()), 0);
  const json c = read_json(out / "cutoff.json");
  EXPECT_EQ(c["support_violations"], 0);
  EXPECT_TRUE(fs::exists(out / "theta.pgm"));
  EXPECT_TRUE(fs::exists(out / "gradient_support.pgm"));
  fs::remove_all(out);
}
