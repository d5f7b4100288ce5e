// Acceptance run: one PASS/FAIL line per criterion. `--only N` runs a single
// criterion (used by ctest so each is reported on its own).

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "blowup/validation.hpp"
#include "cli.hpp"
#include "json.hpp"

namespace {

using blowup::validation::CheckResult;
using nlohmann::json;

std::string fmt(const char* f, double a, double b = 0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

// Runs a CLI sweep in-process and returns (thresholds, grid, seconds).
struct SweepRun {
  int code = 0;
  json doc;
  double seconds = 0;
  std::string err;
};

SweepRun cli_sweep(std::vector<std::string> args) {
  args.insert(args.begin(), {"blowup", "sweep"});
  std::ostringstream out, err;
  const auto t0 = std::chrono::steady_clock::now();
  SweepRun r;
  r.code = blowup::cli::run(args, out, err);
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  r.err = err.str();
  if (r.code == 0) r.doc = json::parse(out.str());
  return r;
}

bool single_threshold(const SweepRun& r, double expected, double tol, std::string& detail) {
  if (r.code != 0) {
    detail += "sweep failed: " + r.err;
    return false;
  }
  const json& th = r.doc["thresholds"];
  detail += "thresholds " + th.dump();
  const bool ok = th.size() == 1 && std::abs(th[0].get<double>() - expected) <= tol && r.seconds < 10.0;
  detail += fmt(" (expected %.12g, %.2fs)", expected, r.seconds);
  return ok;
}

CheckResult ac1() {
  CheckResult c{"isosceles threshold at 55/4", false, "", 0};
  const SweepRun r = cli_sweep({"--builtin", "isosceles", "--param", "alpha", "--range", "1:20"});
  c.passed = single_threshold(r, 55.0 / 4, 1e-6, c.detail);
  c.seconds = r.seconds;
  return c;
}

CheckResult ac2() {
  CheckResult c{"Yoshida thresholds -1/8 and 25/7, direct and complexified", true, "", 0};
  for (const char* family : {"yoshida_g", "yoshida_h"}) {
    const bool flip = std::string(family) == "yoshida_h";
    for (const auto& [range, expected] : {std::pair{"-0.9:0.9", -0.125}, std::pair{"1.1:10", 25.0 / 7}}) {
      std::vector<std::string> args{"--builtin", family, "--param", "epsilon", "--range", range};
      if (flip) args.push_back("--allow-sign-flip");
      const SweepRun r = cli_sweep(args);
      c.detail += std::string(family) + " [" + range + "]: ";
      bool ok = single_threshold(r, expected, 1e-6, c.detail);
      if (ok) {
        // Every certified sample must carry the kind implied by the sign flip.
        const std::string want = flip ? "complexified" : "direct";
        int certified = 0;
        for (const json& row : r.doc["grid"]) {
          if (row.size() > 1 && row[1] == "NonIntegrable") {
            ++certified;
            ok = ok && row.size() == 3 && row[2] == want;
          }
        }
        ok = ok && certified > 0;
        c.detail += fmt(", %.0f certified samples", certified);
        if (flip) c.detail += " all complexified";
      }
      c.detail += "; ";
      c.passed = c.passed && ok;
      c.seconds += r.seconds;
    }
  }
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  namespace v = blowup::validation;
  const std::vector<std::function<CheckResult()>> criteria = {
      ac1,
      ac2,
      [] { return v::morales_ramis_consistency(); },
      [] { return v::energy_conservation(); },
      [] { return v::flow_equivalence(); },
      [] { return v::focus_equivalence(); },
      [] { return v::spiral_demonstration(); },
      [] { return v::beta_minus2_witness(); },
      [] { return v::jet_vs_finite_differences(); },
      [] { return v::gradient_like(); },
  };

  int only = 0;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--only" && i + 1 < argc) {
      only = std::atoi(argv[++i]);
    } else {
      std::fprintf(stderr, "usage: %s [--only N]\n", argv[0]);
      return 1;
    }
  }
  if (only < 0 || only > static_cast<int>(criteria.size())) {
    std::fprintf(stderr, "criterion %d does not exist\n", only);
    return 1;
  }

  bool all = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (only != 0 && static_cast<int>(i) + 1 != only) continue;
    const CheckResult r = criteria[i]();
    all = all && r.passed;
    std::printf("AC%zu %s %s (%.2fs): %s\n", i + 1, r.passed ? "PASS" : "FAIL", r.name.c_str(), r.seconds,
                r.detail.c_str());
    std::fflush(stdout);
  }
  return all ? 0 : 1;
}
