#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "cli.hpp"
#include "json.hpp"

namespace blowup::cli {
namespace {

using nlohmann::json;

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "blowup");
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("blowup_cli_test_" + name);
}

TEST(Cli, CertifyExitCodes) {
  const Outcome ok = run_cli({"certify", "--builtin", "isosceles", "--set", "alpha=13"});
  EXPECT_EQ(ok.code, 0);
  EXPECT_EQ(json::parse(ok.out)["conclusion"], "NonIntegrable");
  EXPECT_NE(ok.err.find("no real-meromorphic"), std::string::npos);

  EXPECT_EQ(run_cli({"certify", "--builtin", "isosceles", "--set", "alpha=15"}).code, 3);
  EXPECT_EQ(run_cli({"certify", "--file", "missing.json"}).code, 1);
}

TEST(Cli, CertifySignFlip) {
  const Outcome r = run_cli({"certify", "--builtin", "yoshida_h", "--set", "epsilon=4", "--allow-sign-flip"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(json::parse(r.out)["kind"], "complexified");
  EXPECT_NE(r.err.find("no meromorphic"), std::string::npos);
}

TEST(Cli, CertifyFromFileWithOverride) {
  const auto path = temp_path("spec.json");
  std::ofstream(path) << R"({"beta": -1, "builtin": "isosceles", "params": {"alpha": 20}})";
  EXPECT_EQ(run_cli({"certify", "--file", path.string()}).code, 3);
  EXPECT_EQ(run_cli({"certify", "--file", path.string(), "--set", "alpha=2"}).code, 0);
  std::ofstream(path) << R"({"builtin": "isosceles"})";
  const Outcome bad = run_cli({"certify", "--file", path.string()});
  EXPECT_EQ(bad.code, 1);
  EXPECT_NE(bad.err.find("$.beta"), std::string::npos);
  std::filesystem::remove(path);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run_cli({}).code, 1);
  EXPECT_EQ(run_cli({"frobnicate"}).code, 1);
  EXPECT_EQ(run_cli({"certify"}).code, 1);
  EXPECT_EQ(run_cli({"certify", "--builtin", "isosceles", "--expr", "cos(theta)"}).code, 1);
  EXPECT_EQ(run_cli({"certify", "--builtin", "isosceles", "--set", "alpha"}).code, 1);
  EXPECT_EQ(run_cli({"certify", "--builtin", "nope"}).code, 1);
  EXPECT_EQ(run_cli({"certify", "--expr", "cos(theta"}).code, 1);
  EXPECT_EQ(run_cli({"certify", "--expr", "cos(theta)"}).code, 1);  // no beta
  EXPECT_EQ(run_cli({"sweep", "--builtin", "isosceles", "--param", "alpha"}).code, 1);
  EXPECT_EQ(run_cli({"sweep", "--builtin", "isosceles", "--param", "alpha", "--range", "3"}).code, 1);
  EXPECT_EQ(run_cli({"sweep", "--builtin", "isosceles", "--param", "gamma", "--range", "1:2"}).code, 1);
  EXPECT_EQ(run_cli({"--help"}).code, 0);
}

TEST(Cli, DomainErrorsExitTwo) {
  // Constant potential: no critical points to work with.
  EXPECT_EQ(run_cli({"certify", "--builtin", "yoshida_g", "--set", "epsilon=1"}).code, 2);
  EXPECT_EQ(run_cli({"manifold", "--builtin", "yoshida_g", "--set", "epsilon=4", "--from", "0.78"}).code, 2);
}

TEST(Cli, Sweep) {
  const Outcome r = run_cli({"sweep", "--builtin", "yoshida_g", "--param", "epsilon", "--range", "1.1:10"});
  ASSERT_EQ(r.code, 0) << r.err;
  const json j = json::parse(r.out);
  ASSERT_EQ(j["thresholds"].size(), 1u);
  EXPECT_NEAR(j["thresholds"][0].get<double>(), 25.0 / 7, 1e-8);
  EXPECT_EQ(j["grid"].size(), 200u);

  const Outcome neg = run_cli({"sweep", "--builtin", "yoshida_g", "--param", "epsilon", "--range", "-0.9:0.9",
                           "--grid", "50"});
  ASSERT_EQ(neg.code, 0) << neg.err;
  EXPECT_NEAR(json::parse(neg.out)["thresholds"][0].get<double>(), -0.125, 1e-8);
}

TEST(Cli, Equilibria) {
  const Outcome r = run_cli({"equilibria", "--builtin", "yoshida_g", "--set", "epsilon=4"});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(json::parse(r.out)["equilibria"].size(), 16u);
}

TEST(Cli, CompareMr) {
  const Outcome r = run_cli({"compare-mr", "--expr", "cos(2*theta) - 3", "--beta", "-1"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(json::parse(r.out)["critical_points"].size(), 4u);
}

TEST(Cli, SimulateWritesCsv) {
  const auto path = temp_path("traj.csv");
  const Outcome r = run_cli({"simulate", "--builtin", "yoshida_g", "--set", "epsilon=4", "--init", "1,0,0,1",
                         "--tau-span", "0:2", "--samples", "4", "-o", path.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  std::ifstream in(path);
  std::string header, first;
  std::getline(in, header);
  std::getline(in, first);
  EXPECT_EQ(header, "tau,t,r,theta,v,w,z,h");
  EXPECT_EQ(first, "0,0,1,0,0,1,0.25,0.25");
  std::filesystem::remove(path);
}

TEST(Cli, SimulateCollisionExitsTwoButKeepsCsv) {
  const Outcome r = run_cli({"simulate", "--builtin", "isosceles", "--set", "alpha=1", "--init", "1,0.5,0,1",
                         "--tau-span", "0:50"});
  EXPECT_EQ(r.code, 2);
  EXPECT_EQ(r.out.rfind("tau,t,r,theta,v,w,z,h\n", 0), 0u);
  EXPECT_GT(std::count(r.out.begin(), r.out.end(), '\n'), 10);
  EXPECT_NE(r.err.find("stopped early"), std::string::npos);
}

TEST(Cli, SimulateOnManifold) {
  const Outcome r = run_cli({"simulate", "--builtin", "yoshida_g", "--set", "epsilon=4", "--on-manifold",
                         "--init", "0.5,0.7071067811865476,0", "--tau-span", "0:1"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(run_cli({"simulate", "--builtin", "yoshida_g", "--set", "epsilon=4", "--init", "1,2,3",
                     "--tau-span", "0:1"})
                .code,
            1);
}

TEST(Cli, ManifoldDiagnostics) {
  const auto diag = temp_path("diag.json");
  const Outcome r = run_cli({"manifold", "--builtin", "yoshida_g", "--set", "epsilon=4", "--from", "0.1", "--sign",
                         "-", "--branch", "stable", "--diagnostics", diag.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  std::ifstream in(diag);
  const json j = json::parse(in);
  EXPECT_TRUE(j["spiral"].get<bool>());
  EXPECT_EQ(j["termination"], "reached_equilibrium");
  EXPECT_NEAR(j["target"]["theta_c"].get<double>(), M_PI / 4, 1e-10);
  EXPECT_EQ(r.out.rfind("tau,t,r,theta,v,w,z,h\n", 0), 0u);
  std::filesystem::remove(diag);
}

}  // namespace
}  // namespace blowup::cli
