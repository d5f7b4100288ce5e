#include "cli.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <string_view>

#include "CLI11.hpp"
#include "blowup/certifier.hpp"
#include "blowup/error.hpp"
#include "blowup/mcgehee.hpp"
#include "blowup/morales.hpp"
#include "blowup/potential.hpp"
#include "blowup/serialize.hpp"
#include "blowup/validation.hpp"

namespace blowup::cli {

namespace {

// Raised for malformed flag values; maps to the usage exit code.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

double parse_number(std::string_view text, std::string_view what) {
  double x = 0.0;
  const char* end = text.data() + text.size();
  // from_chars rejects a leading '+', which is natural to type for a sign.
  const char* begin = !text.empty() && text.front() == '+' ? text.data() + 1 : text.data();
  const auto [ptr, ec] = std::from_chars(begin, end, x);
  if (ec != std::errc() || ptr != end || !std::isfinite(x)) {
    throw UsageError(std::string(what) + ": '" + std::string(text) + "' is not a finite number");
  }
  return x;
}

std::vector<double> parse_list(const std::string& text, char sep, std::size_t count,
                               std::string_view what) {
  std::vector<double> out;
  std::size_t start = 0;
  while (true) {
    // Skip a leading sign so "-1:2" splits on the colon, not before the minus.
    std::size_t pos = text.find(sep, start + (start < text.size() && text[start] == '-' ? 1 : 0));
    out.push_back(parse_number(std::string_view(text).substr(start, pos - start), what));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  if (out.size() != count) {
    throw UsageError(std::string(what) + ": expected " + std::to_string(count) + " values separated by '" +
                     sep + "', got '" + text + "'");
  }
  return out;
}

std::pair<double, double> parse_span(const std::string& text, std::string_view what) {
  const auto v = parse_list(text, ':', 2, what);
  return {v[0], v[1]};
}

struct PotentialArgs {
  std::string builtin;
  std::string expr;
  std::string file;
  double beta = 0.0;
  CLI::Option* beta_opt = nullptr;
  std::vector<std::string> sets;
  std::string domain;

  void attach(CLI::App* app) {
    app->add_option("--builtin", builtin, "Builtin family: isosceles, yoshida_g, yoshida_h");
    app->add_option("--expr", expr, "V(theta) in the expression language");
    app->add_option("--file", file, "JSON potential spec");
    beta_opt = app->add_option("--beta", beta, "Homogeneity degree (required with --expr)");
    app->add_option("--set", sets, "Parameter override name=value (repeatable)");
    app->add_option("--domain", domain, "Open angular interval LO:HI instead of the circle");
  }

  PotentialSpec spec() const {
    const int sources = !builtin.empty() + !expr.empty() + !file.empty();
    if (sources != 1) throw UsageError("exactly one of --builtin, --expr, --file is required");
    PotentialSpec s;
    if (!file.empty()) {
      s = load_spec(file);
    } else if (!builtin.empty()) {
      s = PotentialSpec::from_builtin(builtin);
    } else {
      s.expr = expr;
    }
    if (beta_opt->count() > 0) s.beta = beta;
    if (!domain.empty()) s.domain = parse_span(domain, "--domain");
    for (const std::string& a : sets) {
      try {
        apply_override(s, a);
      } catch (const Error& e) {
        throw UsageError(std::string("--set: ") + e.what());
      }
    }
    return s;
  }
};

// Writes to --output when given, otherwise to the regular stream.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : path_(path) {
    if (path.empty()) {
      os_ = &fallback;
      return;
    }
    file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
    if (!*file_) throw Error(ErrorCode::IoError, "cannot open '" + path + "' for writing");
    os_ = file_.get();
  }

  std::ostream& stream() { return *os_; }

  void finish() {
    os_->flush();
    if (!*os_) throw Error(ErrorCode::IoError, "write to '" + (path_.empty() ? "stdout" : path_) + "' failed");
  }

 private:
  std::string path_;
  std::unique_ptr<std::ofstream> file_;
  std::ostream* os_ = nullptr;
};

int exit_code_for(ErrorCode c) {
  switch (c) {
    case ErrorCode::IoError:
    case ErrorCode::SchemaViolation:
    case ErrorCode::SyntaxError:
    case ErrorCode::UnknownFunction:
    case ErrorCode::UnknownBuiltin:
    case ErrorCode::UnboundParameter:
    case ErrorCode::UnsupportedExpression:
    case ErrorCode::InvalidArgument:
      return kUsage;
    default:
      return kNumeric;
  }
}

int parse_sign(const std::string& s) {
  if (s == "+" || s == "+1" || s == "1") return 1;
  if (s == "-" || s == "-1") return -1;
  throw UsageError("--sign: expected + or -, got '" + s + "'");
}

Equilibrium nearest_equilibrium(const Potential& pot, double theta, int sign) {
  const EquilibriaReport rep = find_equilibria(pot);
  const Equilibrium* best = nullptr;
  double best_gap = std::numeric_limits<double>::infinity();
  for (const Equilibrium& eq : rep.equilibria) {
    if (eq.sign != sign) continue;
    double gap = std::abs(eq.theta_c - theta);
    if (pot.domain().periodic) {
      gap = std::fmod(gap, 2 * M_PI);
      gap = std::min(gap, 2 * M_PI - gap);
    }
    if (gap < best_gap) {
      best = &eq;
      best_gap = gap;
    }
  }
  if (best == nullptr) {
    throw Error(ErrorCode::InvalidArgument, "the potential has no equilibria on the collision manifold");
  }
  return *best;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Non-integrability certificates and blown-up flows for planar homogeneous potentials",
               args.empty() ? "blowup" : args.front()};
  app.require_subcommand(1);
  std::string output;

  // certify
  PotentialArgs certify_pot;
  bool certify_flip = false;
  CLI::App* certify_cmd = app.add_subcommand("certify", "Certificate JSON; exit 3 when inconclusive");
  certify_pot.attach(certify_cmd);
  certify_cmd->add_flag("--allow-sign-flip", certify_flip, "Also try -V (complexified verdict)");

  // sweep
  PotentialArgs sweep_pot;
  bool sweep_flip = false;
  std::string sweep_param;
  std::string sweep_range;
  int sweep_grid = 200;
  double sweep_tol = 1e-9;
  unsigned sweep_workers = 0;
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "Thresholds of the conclusion along a parameter");
  sweep_pot.attach(sweep_cmd);
  sweep_cmd->add_flag("--allow-sign-flip", sweep_flip, "Also try -V (complexified verdict)");
  sweep_cmd->add_option("--param", sweep_param, "Parameter to sweep")->required();
  sweep_cmd->add_option("--range", sweep_range, "LO:HI")->required();
  sweep_cmd->add_option("--grid", sweep_grid, "Grid samples")->check(CLI::Range(2, 1000000));
  sweep_cmd->add_option("--thresh-tol", sweep_tol, "Bracket width for each threshold")
      ->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--workers", sweep_workers, "Worker threads (0: all cores)");

  // equilibria
  PotentialArgs eq_pot;
  CLI::App* eq_cmd = app.add_subcommand("equilibria", "Equilibria on the collision manifold");
  eq_pot.attach(eq_cmd);

  // simulate
  PotentialArgs sim_pot;
  std::string sim_init;
  std::string sim_span;
  double sim_rtol = 1e-10;
  double sim_atol = 1e-12;
  int sim_samples = 0;
  double sim_t_limit = 0.0;
  bool sim_manifold = false;
  bool sim_project = false;
  CLI::App* sim_cmd = app.add_subcommand("simulate", "Trajectory CSV of the blown-up flow");
  sim_pot.attach(sim_cmd);
  sim_cmd
      ->add_option("--init", sim_init,
                   "r,theta,v,w (or theta,v,w with --on-manifold)")
      ->required();
  sim_cmd->add_option("--tau-span", sim_span, "A:B")->required();
  sim_cmd->add_option("--rtol", sim_rtol)->check(CLI::PositiveNumber);
  sim_cmd->add_option("--atol", sim_atol)->check(CLI::PositiveNumber);
  sim_cmd->add_option("--samples", sim_samples, "Extra evenly spaced dense-output samples")
      ->check(CLI::NonNegativeNumber);
  CLI::Option* t_limit_opt =
      sim_cmd->add_option("--t-limit", sim_t_limit, "Stop once physical time passes this value");
  sim_cmd->add_flag("--on-manifold", sim_manifold, "Integrate only (theta, v, w)");
  sim_cmd->add_flag("--project", sim_project, "With --on-manifold: re-project onto z = 0 each step");

  // manifold
  PotentialArgs man_pot;
  double man_from = 0.0;
  std::string man_sign = "-";
  std::string man_branch = "unstable";
  int man_direction = 1;
  double man_offset = 1e-7;
  double man_max_tau = 200.0;
  double man_target = 0.0;
  std::string man_diag;
  CLI::App* man_cmd =
      app.add_subcommand("manifold", "Trace a separatrix of a saddle; CSV plus spiral diagnostics");
  man_pot.attach(man_cmd);
  man_cmd->add_option("--from", man_from, "Angle near the saddle's critical point")->required();
  man_cmd->add_option("--sign", man_sign, "Equilibrium family: + or -");
  man_cmd->add_option("--branch", man_branch, "unstable or stable")
      ->check(CLI::IsMember({"unstable", "stable"}));
  man_cmd->add_option("--direction", man_direction, "+1 or -1: half of the eigenvector line")
      ->check(CLI::IsMember({1, -1}));
  man_cmd->add_option("--offset", man_offset, "Seed distance from the saddle")
      ->check(CLI::PositiveNumber);
  man_cmd->add_option("--max-tau", man_max_tau)->check(CLI::PositiveNumber);
  CLI::Option* target_opt =
      man_cmd->add_option("--target", man_target, "Angle of the equilibrium to wind around");
  man_cmd->add_option("--diagnostics", man_diag, "Diagnostics JSON path (default: stderr)");

  // compare-mr
  PotentialArgs mr_pot;
  CLI::App* mr_cmd =
      app.add_subcommand("compare-mr", "Yoshida coefficients against the necessary inequality");
  mr_pot.attach(mr_cmd);

  // validate
  CLI::App* val_cmd = app.add_subcommand("validate", "Built-in invariant suite; exit 0 iff all pass");

  for (CLI::App* sub : app.get_subcommands({})) {
    sub->add_option("-o,--output", output, "Write the result here instead of stdout");
  }

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (certify_cmd->parsed()) {
      const Potential pot = compile(certify_pot.spec());
      const Certificate cert = certify(pot, certify_flip);
      Sink sink(output, out);
      sink.stream() << to_json(cert);
      sink.finish();
      err << cert.statement() << "\n";
      return cert.conclusion == Conclusion::NonIntegrable ? kOk : kInconclusive;
    }
    if (sweep_cmd->parsed()) {
      const PotentialSpec family = sweep_pot.spec();
      const auto [lo, hi] = parse_span(sweep_range, "--range");
      if (!(lo < hi)) throw UsageError("--range: need LO < HI");
      SweepOptions so;
      so.grid_m = sweep_grid;
      so.thresh_tol = sweep_tol;
      so.allow_sign_flip = sweep_flip;
      so.workers = sweep_workers;
      const SweepResult res = sweep_threshold(family, sweep_param, lo, hi, so);
      Sink sink(output, out);
      sink.stream() << to_json(res);
      sink.finish();
      return kOk;
    }
    if (eq_cmd->parsed()) {
      const Potential pot = compile(eq_pot.spec());
      Sink sink(output, out);
      sink.stream() << to_json(find_equilibria(pot));
      sink.finish();
      return kOk;
    }
    if (sim_cmd->parsed()) {
      const Potential pot = compile(sim_pot.spec());
      const auto [tau0, tau1] = parse_span(sim_span, "--tau-span");
      if (tau0 == tau1) throw UsageError("--tau-span: empty span");
      if (sim_project && !sim_manifold) throw UsageError("--project needs --on-manifold");
      std::vector<double> taus;
      for (int k = 0; k <= sim_samples && sim_samples > 0; ++k) {
        taus.push_back(tau0 + (tau1 - tau0) * k / sim_samples);
      }
      Trajectory traj;
      if (sim_manifold) {
        const auto v = parse_list(sim_init, ',', 3, "--init");
        ManifoldOptions mo;
        mo.rtol = sim_rtol;
        mo.atol = sim_atol;
        mo.output_taus = taus;
        mo.project = sim_project;
        traj = integrate_manifold({v[0], v[1], v[2]}, pot, tau0, tau1, mo);
      } else {
        const auto v = parse_list(sim_init, ',', 4, "--init");
        if (!(v[0] > 0)) throw UsageError("--init: r must be positive");
        IntegrateOptions io;
        io.rtol = sim_rtol;
        io.atol = sim_atol;
        io.output_taus = taus;
        if (t_limit_opt->count() > 0) io.t_limit = sim_t_limit;
        traj = integrate({v[0], v[1], v[2], v[3]}, pot, tau0, tau1, io);
      }
      Sink sink(output, out);
      write_trajectory_csv(sink.stream(), traj);
      sink.finish();
      if (traj.termination != Termination::SpanEnd) {
        err << "integration stopped early: " << to_string(traj.termination) << " at tau "
            << traj.samples.back().tau << "\n";
        return kNumeric;
      }
      return kOk;
    }
    if (man_cmd->parsed()) {
      const Potential pot = compile(man_pot.spec());
      const Equilibrium eq = nearest_equilibrium(pot, man_from, parse_sign(man_sign));
      TraceOptions to;
      to.direction = man_direction;
      to.offset = man_offset;
      to.max_tau = man_max_tau;
      if (target_opt->count() > 0) to.target_theta = man_target;
      const ManifoldTrace tr = trace_invariant_manifold(
          eq, man_branch == "stable" ? Branch::Stable : Branch::Unstable, pot, to);
      Sink sink(output, out);
      write_trajectory_csv(sink.stream(), tr.trajectory);
      sink.finish();
      Sink diag(man_diag, err);
      diag.stream() << to_json(tr);
      diag.finish();
      const Termination t = tr.trajectory.termination;
      return t == Termination::SpanEnd || t == Termination::ReachedEquilibrium ? kOk : kNumeric;
    }
    if (mr_cmd->parsed()) {
      const Potential pot = compile(mr_pot.spec());
      Sink sink(output, out);
      sink.stream() << to_json(compare_morales(pot));
      sink.finish();
      return kOk;
    }
    if (val_cmd->parsed()) {
      Sink sink(output, out);
      bool all = true;
      for (const validation::CheckResult& r : validation::run_suite()) {
        all = all && r.passed;
        char secs[32];
        std::snprintf(secs, sizeof secs, "%.2f", r.seconds);
        sink.stream() << (r.passed ? "PASS " : "FAIL ") << r.name << " (" << secs << "s): " << r.detail
                      << "\n";
      }
      sink.finish();
      return all ? kOk : kNumeric;
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kNumeric;
  }
  return kUsage;
}

}  // namespace blowup::cli
