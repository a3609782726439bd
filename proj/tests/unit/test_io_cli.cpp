#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "funk/cli.hpp"
#include "funk/io.hpp"
#include "funk/phantoms.hpp"
#include "test_util.hpp"

using namespace funk;
using funk::testing::kind_of;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = std::numbers::pi;

struct CliRun {
  int code = 0;
  std::string out;
  std::string err;
};

CliRun cli(std::vector<std::string> args) {
  args.insert(args.begin(), "funk");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

class TempDir {
 public:
  TempDir() {
    path_ = fs::temp_directory_path() /
            ("funk_test_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) + "_" +
             ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  fs::path operator/(const std::string& name) const { return path_ / name; }

 private:
  fs::path path_;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::vector<double>> csv_rows(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    std::vector<double> row;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) row.push_back(std::stod(cell));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

TEST(Io, FormatRealRoundTrips) {
  for (double v : {0.1, kPi, -1e-300, 1.0 / 3.0, 6.02214076e23}) EXPECT_EQ(std::stod(format_real(v)), v);
  EXPECT_EQ(sidecar_path("a/b/grid.csv"), fs::path("a/b/grid.json"));
}

TEST(Io, GridRoundTripIsBitExact) {
  TempDir dir;
  const TransformGrid g = transform_grid(make_phantom("bump").field, UnitVector(0.1, 0.2, 0.9), 12, 10, 32);
  write_grid(g, dir / "g.csv");
  EXPECT_TRUE(fs::exists(dir / "g.json"));
  const TransformGrid r = read_grid(dir / "g.csv");
  EXPECT_EQ(r.nu_nodes, g.nu_nodes);
  EXPECT_EQ(r.tau_nodes, g.tau_nodes);
  EXPECT_EQ(r.ff, g.ff);
  EXPECT_EQ(r.cf, g.cf);
  EXPECT_EQ(r.sf, g.sf);
  EXPECT_EQ(r.pole.vec().x, g.pole.vec().x);
  EXPECT_EQ(r.pole.vec().z, g.pole.vec().z);
  EXPECT_EQ(r.circle_nodes, 32);
  std::ostringstream a;
  std::ostringstream b;
  write_grid_csv(g, a);
  write_grid_csv(r, b);
  EXPECT_EQ(a.str(), b.str());
}

TEST(Io, GridWithoutSidecarUsesNorthPole) {
  TempDir dir;
  const TransformGrid g = transform_grid(make_phantom("cos3_nu").field, north_pole(), 8, 8, 16);
  write_grid(g, dir / "g.csv");
  fs::remove(dir / "g.json");
  const TransformGrid r = read_grid(dir / "g.csv");
  EXPECT_EQ(r.pole.z(), 1.0);
  EXPECT_EQ(r.cf, g.cf);
}

TEST(Io, MalformedInput) {
  TempDir dir;
  EXPECT_EQ(kind_of([&] { read_grid(dir / "missing.csv"); }), ErrorKind::Io);
  std::istringstream bad_header("a,b\n1,2\n");
  EXPECT_EQ(kind_of([&] { read_grid_csv(bad_header); }), ErrorKind::Io);
  std::istringstream bad_cell("nu,tau,Ff,Cf,Sf\n0.1,0,1,x,0\n");
  EXPECT_EQ(kind_of([&] { read_grid_csv(bad_cell); }), ErrorKind::Io);
  std::istringstream ragged("nu,tau,Ff,Cf,Sf\n0.5,0,1,0,0\n0.5,3,1,0,0\n1.5707963267948966,0,1,0,0\n");
  EXPECT_EQ(kind_of([&] { read_grid_csv(ragged); }), ErrorKind::Io);
  EXPECT_EQ(kind_of([&] { write_text("x", dir / "no" / "such" / "dir" / "f.txt", std::cout); }), ErrorKind::Io);
}

TEST(Io, FieldCsvRoundTrip) {
  TempDir dir;
  const FieldGrid g = sample_field(make_phantom("mixed").field, north_pole(), 9, 8);
  {
    std::ofstream f(dir / "f.csv");
    write_field_csv(g, f);
  }
  const FieldGrid r = read_field_csv(dir / "f.csv");
  EXPECT_EQ(r.nu_count, 9);
  EXPECT_EQ(r.tau_count, 8);
  EXPECT_EQ(r.values, g.values);
}

TEST(Io, CoefficientsJson) {
  const json j = json::parse(coefficients_json(build_coeff_table(3), 4).dump());
  EXPECT_EQ(j["even"]["2"], json::parse(R"([["-4","1"]])"));
  EXPECT_EQ(j["even"]["4"], json::parse(R"([["8","1"],["-24","1"]])"));
  EXPECT_EQ(j["odd"]["5"], json::parse(R"([["12","1"],["-24","1"]])"));
  EXPECT_TRUE(j["metadata"]["all_identities_hold"].get<bool>());
  EXPECT_EQ(j["samples"]["u"].size(), 5u);
}

TEST(Cli, ForwardConstant) {
  const CliRun r = cli({"forward", "--phantom", "const1", "--nu-steps", "8", "--tau-steps", "8", "--circle-nodes", "16"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "nu,tau,Ff,Cf,Sf");
  const auto rows = csv_rows(r.out);
  ASSERT_EQ(rows.size(), 64u);
  for (const auto& row : rows) {
    EXPECT_NEAR(row[2], 1.0, 1e-15);
    EXPECT_NEAR(row[3], 0.0, 1e-15);
  }
}

TEST(Cli, ForwardCos3) {
  const CliRun r = cli({"forward", "--phantom", "cos3_nu", "--nu-steps", "16", "--tau-steps", "8"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  for (const auto& row : csv_rows(r.out)) EXPECT_NEAR(row[3], 3.0 / 8.0 * std::pow(std::sin(row[0]), 3), 1e-14);
}

TEST(Cli, ForwardIsByteStable) {
  TempDir dir;
  const std::vector<std::string> args = {"forward", "--phantom", "bump", "--nu-steps", "16", "--tau-steps", "8"};
  auto a = args;
  a.insert(a.end(), {"--output", (dir / "a.csv").string()});
  auto b = args;
  b.insert(b.end(), {"--output", (dir / "b.csv").string()});
  ASSERT_EQ(cli(a).code, kExitOk);
  ASSERT_EQ(cli(b).code, kExitOk);
  EXPECT_EQ(slurp(dir / "a.csv"), slurp(dir / "b.csv"));
  EXPECT_EQ(slurp(dir / "a.json"), slurp(dir / "b.json"));
  EXPECT_EQ(slurp(dir / "a.csv"), cli(args).out);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(cli({"forward", "--nu-steps", "16"}).code, kExitUsage);
  EXPECT_EQ(cli({"forward", "--phantom", "nope"}).code, kExitUsage);
  EXPECT_EQ(cli({"forward", "--phantom", "cos3_nu", "--input", "x.csv"}).code, kExitUsage);
  EXPECT_EQ(cli({"invert", "--phantom", "cos3_nu", "--point", "1,2"}).code, kExitUsage);
  EXPECT_EQ(cli({"invert", "--phantom", "cos3_nu", "--n", "2", "--auto"}).code, kExitUsage);
  EXPECT_EQ(cli({"frobnicate"}).code, kExitUsage);
  EXPECT_EQ(cli({}).code, kExitUsage);
  EXPECT_EQ(cli({"invert", "--input", "/nonexistent/grid.csv"}).code, kExitUsage);
}

TEST(Cli, ComputeErrors) {
  EXPECT_EQ(cli({"coeffs", "--max", "20", "--limit", "1000"}).code, kExitCompute);
  EXPECT_EQ(cli({"invert", "--phantom", "cos3_nu", "--n", "21"}).code, kExitCompute);
}

TEST(Cli, InvertExamples) {
  const CliRun r = cli({"invert", "--phantom", "cos3_nu", "--point", "0,0,1", "--n", "2"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const json j = json::parse(r.out);
  EXPECT_NEAR(j["estimate"].get<double>(), 1.0, 1e-12);
  EXPECT_EQ(j["mode"], "fixed");
  EXPECT_EQ(j["n_used"], 2);
  EXPECT_NEAR(j["truth"].get<double>(), 1.0, 0.0);

  const json c = json::parse(cli({"invert", "--phantom", "const1", "--n", "5"}).out);
  EXPECT_NEAR(c["estimate"].get<double>(), 1.0, 1e-12);

  const json b = json::parse(cli({"invert", "--phantom", "bump", "--auto", "--tol", "1e-8"}).out);
  EXPECT_EQ(b["mode"], "auto");
  EXPECT_EQ(b["stop_reason"], "tolerance");
  EXPECT_LT(b["abs_error"].get<double>(), 1e-8);

  const json off = json::parse(cli({"invert", "--phantom", "mixed", "--point", "0.3,-0.4,0.5", "--n", "6"}).out);
  EXPECT_LT(off["abs_error"].get<double>(), 1e-9);
}

TEST(Cli, InvertFromGrid) {
  TempDir dir;
  const std::string csv = (dir / "g.csv").string();
  ASSERT_EQ(cli({"forward", "--phantom", "bump", "--nu-steps", "256", "--tau-steps", "32", "--output", csv}).code,
            kExitOk);
  const CliRun r = cli({"invert", "--input", csv, "--n", "8"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const json j = json::parse(r.out);
  const double truth = make_phantom("bump").truth(north_pole());
  EXPECT_NEAR(j["estimate"].get<double>(), truth, 1e-7);
  ASSERT_TRUE(j.contains("interpolation_tolerance"));
  EXPECT_GE(j["interpolation_tolerance"].get<double>(), std::abs(j["estimate"].get<double>() - truth));
  const fs::path report = dir / "r.json";
  ASSERT_EQ(cli({"invert", "--input", csv, "--n", "8", "--output", report.string()}).code, kExitOk);
  EXPECT_EQ(json::parse(slurp(report))["estimate"], j["estimate"]);
}

TEST(Cli, CoeffsExamples) {
  const CliRun r = cli({"coeffs", "--max", "4"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const json j = json::parse(r.out);
  EXPECT_EQ(j["even"]["6"], json::parse(R"([["-12","1"],["96","1"],["-120","1"]])"));
  EXPECT_EQ(j["even"].size(), 4u);
  EXPECT_EQ(j["metadata"]["kmax"], 4);
}

TEST(Cli, VerifyPassesAndCatchesCorruption) {
  const CliRun r = cli({"verify", "--suite", "theorem3"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("100/100"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("PASS"), std::string::npos);
  const CliRun bad = cli({"verify", "--suite", "identities", "--corrupt-coefficient", "even:2:1:1"});
  EXPECT_EQ(bad.code, kExitVerifyFailed);
  EXPECT_NE(bad.out.find("FAIL"), std::string::npos);
  EXPECT_FALSE(bad.err.empty());
  EXPECT_EQ(cli({"verify", "--suite", "identities", "--corrupt-coefficient", "bogus"}).code, kExitUsage);
}

TEST(Cli, ConfigFile) {
  TempDir dir;
  {
    std::ofstream f(dir / "c.cfg");
    f << "# test\nphantom = cos3_nu\nn = 2\npoint=0,0,1\n";
  }
  const CliRun r = cli({"invert", "--config", (dir / "c.cfg").string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NEAR(json::parse(r.out)["estimate"].get<double>(), 1.0, 1e-12);
  const CliRun over = cli({"invert", "--config", (dir / "c.cfg").string(), "--phantom", "const1"});
  EXPECT_NEAR(json::parse(over.out)["estimate"].get<double>(), 1.0, 1e-12);
  EXPECT_NE(json::parse(over.out)["source"].get<std::string>().find("const1"), std::string::npos);
  EXPECT_EQ(cli({"invert", "--config", (dir / "none.cfg").string()}).code, kExitUsage);
}

TEST(Cli, ConvergenceTable) {
  const CliRun r = cli({"convergence", "--phantom", "cos3_nu", "--n-max", "6", "--tol", "0"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "n,estimate,abs_error,cauchy_gap");
  const auto rows = csv_rows(r.out);
  ASSERT_EQ(rows.size(), 6u);
  EXPECT_NEAR(rows[0][1], 0.75, 1e-12);
  for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_LT(rows[i][2], 1e-9);

  const CliRun z = cli({"convergence", "--phantom", "cos_nu", "--format", "json"});
  ASSERT_EQ(z.code, kExitOk) << z.err;
  const json j = json::parse(z.out);
  EXPECT_TRUE(j["stopped_on_tolerance"].get<bool>());
  EXPECT_NEAR(j["rows"][0]["estimate"].get<double>(), 1.0, 1e-12);
}
