#include "blowup/validation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <future>
#include <random>
#include <string>

#include "blowup/certifier.hpp"
#include "blowup/error.hpp"
#include "blowup/expression.hpp"
#include "blowup/mcgehee.hpp"
#include "blowup/morales.hpp"
#include "blowup/potential.hpp"

namespace blowup::validation {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <typename... Args>
std::string format(const char* fmt, Args... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, fmt, args...);
  return buf;
}

CheckResult timed(std::string name, const std::function<void(CheckResult&)>& body) {
  CheckResult r;
  r.name = std::move(name);
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(r);
  } catch (const std::exception& e) {
    r.passed = false;
    r.detail = std::string("error: ") + e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

// Runs f(i) for i in [0, n) concurrently; results keep index order.
template <typename F>
auto parallel_map(int n, F f) {
  using R = decltype(f(0));
  std::vector<std::future<R>> futs;
  futs.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) futs.push_back(std::async(std::launch::async, f, i));
  std::vector<R> out;
  out.reserve(futs.size());
  for (auto& fu : futs) out.push_back(fu.get());
  return out;
}

Potential isosceles1() { return compile(PotentialSpec::from_builtin("isosceles", {{"alpha", 1.0}})); }
Potential yoshida_g4() {
  return compile(PotentialSpec::from_builtin("yoshida_g", {{"epsilon", 4.0}}));
}
Potential trig_minus1() {
  return compile(PotentialSpec::from_expression("-3 + cos(2*theta) + 0.3*sin(3*theta)", -1.0));
}

}  // namespace

CheckResult isosceles_threshold(double tol) {
  return timed("isosceles threshold at 55/4", [&](CheckResult& r) {
    const SweepResult s = sweep_threshold(PotentialSpec::from_builtin("isosceles"), "alpha", 1.0, 20.0);
    const double expected = 55.0 / 4.0;
    r.passed = s.thresholds.size() == 1 && std::abs(s.thresholds[0].value - expected) <= tol;
    r.detail = format("%zu threshold(s)", s.thresholds.size());
    for (const Threshold& t : s.thresholds) r.detail += format(" %.12f", t.value);
    r.detail += format(" (expected %.12f)", expected);
  });
}

CheckResult yoshida_thresholds(double tol) {
  return timed("yoshida thresholds at -1/8 and 25/7", [&](CheckResult& r) {
    struct Case {
      double lo, hi, expected;
    };
    const Case cases[] = {{-0.9, 0.9, -0.125}, {1.1, 10.0, 25.0 / 7.0}};
    bool ok = true;
    for (const Case& c : cases) {
      const SweepResult g =
          sweep_threshold(PotentialSpec::from_builtin("yoshida_g"), "epsilon", c.lo, c.hi);
      SweepOptions flip;
      flip.allow_sign_flip = true;
      const SweepResult h =
          sweep_threshold(PotentialSpec::from_builtin("yoshida_h"), "epsilon", c.lo, c.hi, flip);
      const bool g_ok = g.thresholds.size() == 1 && std::abs(g.thresholds[0].value - c.expected) <= tol;
      const bool h_ok = h.thresholds.size() == 1 && std::abs(h.thresholds[0].value - c.expected) <= tol;
      bool kinds_ok = true;
      int complexified = 0;
      for (const SweepSample& s : h.grid) {
        if (s.conclusion == Conclusion::NonIntegrable) {
          kinds_ok = kinds_ok && s.kind == CertificateKind::Complexified;
          ++complexified;
        }
      }
      kinds_ok = kinds_ok && complexified > 0;
      ok = ok && g_ok && h_ok && kinds_ok;
      r.detail += format("[%g,%g] g:", c.lo, c.hi);
      for (const Threshold& t : g.thresholds) r.detail += format(" %.12f", t.value);
      r.detail += " h:";
      for (const Threshold& t : h.thresholds) r.detail += format(" %.12f", t.value);
      r.detail += format(" (%d complexified%s); ", complexified, kinds_ok ? "" : ", kind mismatch");
    }
    r.passed = ok;
  });
}

CheckResult morales_ramis_consistency() {
  return timed("beta=-1 Morales-Ramis set vs necessary inequality", [&](CheckResult& r) {
    bool ok = true;
    const double first[] = {1.0, 0.0, -2.0, -5.0, -9.0};
    for (double lam : first) {
      ok = ok && mr_beta_minus1_member(lam) && check_integrability_necessary(lam, -1.0).satisfied;
    }
    int members_checked = 0;
    for (int p = -20; p <= 20; ++p) {
      const double lam = -p * (p - 3) / 2.0;
      ok = ok && check_integrability_necessary(lam, -1.0).satisfied && lam <= 9.0 / 8.0;
      ++members_checked;
    }
    const double boundary = necessary_boundary(-1.0);
    const NecessaryCheck at = check_integrability_necessary(9.0 / 8.0, -1.0);
    const NecessaryCheck above = check_integrability_necessary(9.0 / 8.0 + 1e-9, -1.0);
    const bool boundary_ok = std::abs(boundary - 9.0 / 8.0) <= 1e-12 && at.satisfied &&
                             std::abs(at.margin) <= 1e-12 && !above.satisfied;
    r.passed = ok && boundary_ok;
    r.detail = format("first five members ok=%s, %d members p in [-20,20] checked, boundary %.15f",
                      ok ? "yes" : "no", members_checked, boundary);
  });
}

CheckResult energy_conservation(const EnergyOptions& opts) {
  return timed("energy conservation over tau in [0, 50]", [&](CheckResult& r) {
    struct Family {
      const char* name;
      Potential pot;
      double theta_lo, theta_hi;
    };
    const Family families[] = {{"isosceles(1)", isosceles1(), -1.0, 1.0},
                               {"yoshida_g(4)", yoshida_g4(), 0.0, 2.0 * M_PI}};
    std::mt19937_64 rng(opts.seed);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    bool ok = true;
    for (const Family& f : families) {
      std::vector<McGeheeState> starts;
      while (static_cast<int>(starts.size()) < opts.orbits) {
        McGeheeState s{0.5 + 1.5 * U(rng), f.theta_lo + (f.theta_hi - f.theta_lo) * U(rng),
                       -1.0 + 2.0 * U(rng), -1.0 + 2.0 * U(rng)};
        if (std::abs(energy(s, f.pot)) >= 1e-3) starts.push_back(s);
      }
      struct Outcome {
        bool reached;
        double drift;
        double tau;
        double moderate_drift;  // restricted to the sampling box r in [0.5, 2]
      };
      const auto outcomes = parallel_map(opts.orbits, [&](int i) {
        IntegrateOptions io;
        io.rtol = opts.rtol;
        io.atol = opts.atol;
        const Trajectory tr = integrate(starts[static_cast<std::size_t>(i)], f.pot, 0.0, opts.tau_end, io);
        const double h0 = tr.samples.front().h;
        double drift = 0.0;
        double moderate = 0.0;
        for (const TrajectorySample& s : tr.samples) {
          const double d = std::isfinite(s.h) ? std::abs(s.h - h0) / std::abs(h0) : kInf;
          drift = std::max(drift, d);
          if (s.r >= 0.5 && s.r <= 2.0) moderate = std::max(moderate, d);
        }
        return Outcome{tr.termination == Termination::SpanEnd, drift, tr.samples.back().tau,
                       moderate};
      });
      int reached = 0;
      int within = 0;
      double worst = 0.0;
      double worst_moderate = 0.0;
      double median_tau_stop = 0.0;
      std::vector<double> stops;
      for (const Outcome& o : outcomes) {
        reached += o.reached;
        within += o.reached && o.drift <= opts.tol;
        worst = std::max(worst, o.drift);
        worst_moderate = std::max(worst_moderate, o.moderate_drift);
        if (!o.reached) stops.push_back(o.tau);
      }
      if (!stops.empty()) {
        std::sort(stops.begin(), stops.end());
        median_tau_stop = stops[stops.size() / 2];
      }
      ok = ok && within == opts.orbits;
      r.detail += format("%s: %d/%d reached tau=%g, %d/%d within %.0e, worst drift %.3e", f.name,
                         reached, opts.orbits, opts.tau_end, within, opts.orbits, opts.tol, worst);
      if (!stops.empty()) r.detail += format(", median stop tau %.3g", median_tau_stop);
      r.detail += format(", worst drift while 0.5 <= r <= 2 %.3e; ", worst_moderate);
    }
    r.passed = ok;
  });
}

CheckResult flow_equivalence(const FlowEquivalenceOptions& opts) {
  return timed("Cartesian vs blown-up flow equivalence", [&](CheckResult& r) {
    const Potential pot = isosceles1();
    const double beta = pot.beta();
    std::mt19937_64 rng(opts.seed);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    CartesianOptions co;
    co.rtol = opts.rtol;
    co.atol = opts.atol;

    // Rejection sampling keeps orbits away from triple (r -> 0) and binary
    // (cos theta -> 0) collisions over the whole window.
    std::vector<PhaseState> starts;
    int attempts = 0;
    while (static_cast<int>(starts.size()) < opts.orbits && attempts < 10000) {
      ++attempts;
      // Bound orbits of this system meet binary collisions within a few time
      // units, so starts have an outward radial momentum large enough to leave
      // the well (h > 0) and a random tangential part.
      const double r0 = 0.8 + 0.7 * U(rng);
      const double th = -0.6 + 1.2 * U(rng);
      const double pr = 1.5 + 2.0 * U(rng);
      const double pt = -1.0 + 2.0 * U(rng);
      PhaseState ps;
      ps.q = {r0 * std::cos(th), r0 * std::sin(th)};
      ps.p = {pr * std::cos(th) - pt * std::sin(th), pr * std::sin(th) + pt * std::cos(th)};
      const CartesianTrajectory ct = integrate_cartesian(ps.p, ps.q, pot, 0.0, opts.t_end, co);
      if (ct.termination != Termination::SpanEnd) continue;
      const bool clear = std::all_of(ct.samples.begin(), ct.samples.end(), [](const auto& s) {
        const double rr = std::hypot(s.q[0], s.q[1]);
        return rr >= 0.1 && s.q[0] / rr >= 0.1;
      });
      if (clear) starts.push_back(ps);
    }
    if (static_cast<int>(starts.size()) < opts.orbits) {
      r.passed = false;
      r.detail = format("only %zu admissible starts in %d attempts", starts.size(), attempts);
      return;
    }
    const auto devs = parallel_map(opts.orbits, [&](int i) {
      const PhaseState& ps = starts[static_cast<std::size_t>(i)];
      IntegrateOptions io;
      io.rtol = opts.rtol;
      io.atol = opts.atol;
      io.t_limit = opts.t_end;
      const Trajectory mt = integrate(to_mcgehee(ps.p, ps.q, beta), pot, 0.0, 1e4, io);
      CartesianOptions c2 = co;
      c2.record_steps = false;
      std::vector<const TrajectorySample*> used;
      for (const TrajectorySample& s : mt.samples) {
        if (s.t > 0.0 && s.t <= opts.t_end) {
          c2.output_times.push_back(s.t);
          used.push_back(&s);
        }
      }
      const CartesianTrajectory ct = integrate_cartesian(ps.p, ps.q, pot, 0.0, opts.t_end, c2);
      double worst = 0.0;
      std::size_t k = 1;
      for (const TrajectorySample* s : used) {
        while (k < ct.samples.size() && ct.samples[k].t != s->t) ++k;
        if (k >= ct.samples.size()) return kInf;
        const double qx = s->r * std::cos(s->theta);
        const double qy = s->r * std::sin(s->theta);
        worst = std::max(worst, std::hypot(qx - ct.samples[k].q[0], qy - ct.samples[k].q[1]));
      }
      const bool covered = !used.empty() && mt.samples.back().t >= opts.t_end;
      return covered ? worst : kInf;
    });
    const double worst = *std::max_element(devs.begin(), devs.end());
    r.passed = worst <= opts.tol;
    r.detail = format("%d orbits (%d draws), max |q_cart - q_blowup| = %.3e over t in [0, %g]",
                      opts.orbits, attempts, worst, opts.t_end);
  });
}

CheckResult focus_equivalence(const FocusOptions& opts) {
  return timed("assumption-6 margin vs focus at D0-", [&](CheckResult& r) {
    std::mt19937_64 rng(opts.seed);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    auto draw = [&]() {
      PotentialSpec spec;
      const int degree = 1 + static_cast<int>(U(rng) * 4.0) % 4;
      std::string text = format("%.17g", -0.5 - 2.5 * U(rng));
      for (int k = 1; k <= degree; ++k) {
        text += format(" + %.17g*cos(%d*theta) + %.17g*sin(%d*theta)", -1.0 + 2.0 * U(rng), k,
                       -1.0 + 2.0 * U(rng), k);
      }
      double beta = 0.5 + 3.5 * U(rng);
      if (U(rng) < 0.5) beta = -beta;
      return PotentialSpec::from_expression(text, beta);
    };
    struct Outcome {
      bool valid = false;
      bool in_band = false;
      bool agree = false;
    };
    int valid = 0, banded = 0, agreed = 0, drawn = 0;
    while (valid < opts.potentials && drawn < 100 * opts.potentials) {
      std::vector<PotentialSpec> batch;
      for (int i = 0; i < 64; ++i) batch.push_back(draw());
      drawn += 64;
      const auto outs = parallel_map(static_cast<int>(batch.size()), [&](int i) {
        Outcome o;
        try {
          const Potential pot = compile(batch[static_cast<std::size_t>(i)]);
          const Certificate c = certify(pot);
          if (!c.triple) return o;
          for (int k = 0; k < 5; ++k) {
            if (!c.reports[static_cast<std::size_t>(k)].satisfied) return o;
          }
          o.valid = true;
          const double margin = c.assumption6_margin();
          o.in_band = std::abs(margin) <= opts.band;
          const Equilibrium eq = make_equilibrium(pot, (*c.triple)[1], -1);
          const bool focus = eq.lambda23[0].imag() != 0.0;
          o.agree = (margin > 0.0) == focus;
        } catch (const Error&) {
        }
        return o;
      });
      for (const Outcome& o : outs) {
        if (!o.valid || valid >= opts.potentials) continue;
        ++valid;
        if (o.in_band) {
          ++banded;
        } else {
          agreed += o.agree;
        }
      }
    }
    r.passed = valid == opts.potentials && agreed == valid - banded;
    r.detail = format("%d potentials with a valid triple (%d drawn): %d/%d agree outside the band, %d in band",
                      valid, drawn, agreed, valid - banded, banded);
  });
}

CheckResult spiral_demonstration() {
  return timed("separatrix spirals into the focus", [&](CheckResult& r) {
    struct Case {
      const char* name;
      Potential pot;
      double saddle_hint;
      int direction;
    };
    // Saddles: theta = 0 for yoshida_g(4); theta* = arccos sqrt((a+2)/(4a+2))
    // = pi/4 for isosceles(1). The spiral is traced towards the focus.
    const Case cases[] = {{"yoshida_g(4)", yoshida_g4(), 0.0, 1},
                          {"isosceles(1)", isosceles1(), M_PI / 4, -1}};
    bool ok = true;
    for (const Case& c : cases) {
      const EquilibriaReport all = find_equilibria(c.pot);
      const Equilibrium* saddle = nullptr;
      for (const Equilibrium& e : all.equilibria) {
        if (e.sign != -1 || e.type != EquilibriumType::Saddle) continue;
        if (!saddle || std::abs(e.theta_c - c.saddle_hint) < std::abs(saddle->theta_c - c.saddle_hint)) {
          saddle = &e;
        }
      }
      if (!saddle) throw Error(ErrorCode::NotSaddle, std::string("no saddle for ") + c.name);
      const Equilibrium& eq = *saddle;
      TraceOptions to;
      to.direction = c.direction;
      const ManifoldTrace tr = trace_invariant_manifold(eq, Branch::Stable, c.pot, to);
      const bool pass = tr.min_distance <= 1e-3 && tr.swept_angle_near >= 4.0 * M_PI;
      ok = ok && pass;
      r.detail += format("%s: W^s(D-@%.6f) backward -> D-@%.6f, min dist %.2e, swept %.2f rad (%.2f inside 1e-3); ",
                         c.name, eq.theta_c, tr.target.theta_c, tr.min_distance, tr.swept_angle,
                         tr.swept_angle_near);
    }
    r.passed = ok;
  });
}

CheckResult beta_minus2_witness(const WitnessOptions& opts) {
  return timed("beta=-2 first integral G", [&](CheckResult& r) {
    const char* expr = "cos(2*theta)-2";
    const Potential p2 = compile(PotentialSpec::from_expression(expr, -2.0));
    const Potential p1 = compile(PotentialSpec::from_expression(expr, -1.0));
    std::mt19937_64 rng(opts.seed);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    // Angular momentum large enough that G(0) = -(L^2 + 2V) < 0: no collision.
    std::vector<PhaseState> starts;
    while (static_cast<int>(starts.size()) < opts.orbits) {
      const double r0 = 0.5 + 1.5 * U(rng);
      const double th = 2.0 * M_PI * U(rng);
      PhaseState ps;
      ps.q = {r0 * std::cos(th), r0 * std::sin(th)};
      ps.p = {-3.0 + 6.0 * U(rng), -3.0 + 6.0 * U(rng)};
      const double L = ps.q[0] * ps.p[1] - ps.q[1] * ps.p[0];
      if (L * L + 2.0 * p2.eval(th).value > 0.5) starts.push_back(ps);
    }
    CartesianOptions co;
    co.rtol = opts.rtol;
    co.atol = opts.atol;
    double worst2 = 0.0;
    double least1 = kInf;
    for (const PhaseState& ps : starts) {
      const CartesianTrajectory t2 = integrate_cartesian(ps.p, ps.q, p2, 0.0, opts.t_end, co);
      const double g2 = std::abs(beta_minus2_G(t2.samples.front()));
      worst2 = std::max(worst2, check_beta_minus2_integral(t2) / g2);
      const CartesianTrajectory t1 = integrate_cartesian(ps.p, ps.q, p1, 0.0, opts.t_end, co);
      const double g1 = std::abs(beta_minus2_G(t1.samples.front()));
      least1 = std::min(least1, check_beta_minus2_integral(t1) / g1);
    }
    r.passed = worst2 <= 1e-8 && least1 > 1e-3;
    r.detail = format("beta=-2 max relative deviation %.3e (<= 1e-8); beta=-1 min relative deviation %.3e (> 1e-3)",
                      worst2, least1);
  });
}

namespace {

std::string random_expression(std::mt19937_64& rng, int depth) {
  std::uniform_real_distribution<double> U(0.0, 1.0);
  if (depth == 0 || U(rng) < 0.2) {
    if (U(rng) < 0.6) return "theta";
    return format("%.3f", -2.0 + 4.0 * U(rng));
  }
  const std::string a = random_expression(rng, depth - 1);
  switch (static_cast<int>(U(rng) * 14.0)) {
    case 0: return "(" + a + " + " + random_expression(rng, depth - 1) + ")";
    case 1: return "(" + a + " - " + random_expression(rng, depth - 1) + ")";
    case 2: return "(" + a + " * " + random_expression(rng, depth - 1) + ")";
    case 3: return "(" + a + " / (2.5 + sin(" + random_expression(rng, depth - 1) + ")))";
    case 4: return "sin(" + a + ")";
    case 5: return "cos(" + a + ")";
    case 6: return "exp(sin(" + a + "))";
    case 7: return "sqrt(2 + cos(" + a + "))";
    case 8: return "log(3 + sin(" + a + "))";
    case 9: return "(" + a + ")^2";
    case 10: return "sin(" + a + ")^3";
    case 11: return "-(" + a + ")";
    case 12: return "tan(0.5*sin(" + a + "))";
    default: return "(1.5 + cos(" + a + "))^(0.5)";
  }
}

// Ridders' extrapolation of a central difference D(h), even in h, towards
// h = 0. Returns the estimate with the smallest tableau error. The whole
// tableau is always built: the usual early exit fires on a lucky small error
// estimate at coarse steps and returns a poor value.
template <typename D>
double ridders(D diff, double h0) {
  constexpr int kTab = 10;
  constexpr double kCon = 1.4, kCon2 = kCon * kCon;
  double a[kTab][kTab];
  double h = h0;
  double err = std::numeric_limits<double>::max();
  a[0][0] = diff(h);
  double ans = a[0][0];
  for (int i = 1; i < kTab; ++i) {
    h /= kCon;
    a[0][i] = diff(h);
    double fac = kCon2;
    for (int j = 1; j <= i; ++j) {
      a[j][i] = (a[j - 1][i] * fac - a[j - 1][i - 1]) / (fac - 1.0);
      fac *= kCon2;
      const double e = std::max(std::abs(a[j][i] - a[j - 1][i]), std::abs(a[j][i] - a[j - 1][i - 1]));
      if (e <= err) {
        err = e;
        ans = a[j][i];
      }
    }
  }
  return ans;
}

// Largest violation of |jet - fd| <= tol * max(1, |jet|) over the grid,
// expressed as a ratio (<= 1 passes). The starting step stays inside open
// domains so no stencil point crosses a pole.
double fd_ratio(const Potential& pot, const std::vector<double>& grid, double step, double tol) {
  const Domain& d = pot.domain();
  double worst = 0.0;
  for (double x : grid) {
    const double h0 = d.periodic ? step : std::min(step, 0.5 * std::min(x - d.lo, d.hi - x));
    const Jet2<double> j = pot.eval(x);
    auto f = [&](double t) { return pot.eval(t).value; };
    const double d1 = ridders([&](double h) { return (f(x + h) - f(x - h)) / (2.0 * h); }, h0);
    const double d2 =
        ridders([&](double h) { return (f(x + h) - 2.0 * j.value + f(x - h)) / (h * h); }, h0);
    worst = std::max(worst, std::abs(j.d1 - d1) / (tol * std::max(1.0, std::abs(j.d1))));
    worst = std::max(worst, std::abs(j.d2 - d2) / (tol * std::max(1.0, std::abs(j.d2))));
  }
  return worst;
}

std::vector<double> grid_for(const Domain& d, int n) {
  std::vector<double> g(static_cast<std::size_t>(n));
  if (d.periodic) {
    for (int k = 0; k < n; ++k) g[static_cast<std::size_t>(k)] = 2.0 * M_PI * k / n;
  } else {
    // Stay slightly clear of the endpoints themselves.
    const double lo = d.lo + 0.02, hi = d.hi - 0.02;
    for (int k = 0; k < n; ++k) g[static_cast<std::size_t>(k)] = lo + (hi - lo) * k / (n - 1);
  }
  return g;
}

}  // namespace

CheckResult jet_vs_finite_differences(const JetOptions& opts) {
  return timed("jet derivatives vs central finite differences", [&](CheckResult& r) {
    bool ok = true;
    const Potential builtins_[] = {isosceles1(), yoshida_g4()};
    for (const Potential& p : builtins_) {
      const double ratio = fd_ratio(p, grid_for(p.domain(), opts.grid), opts.step, opts.tol);
      ok = ok && ratio <= 1.0;
      r.detail += format("%s worst/tol %.2e; ", p.spec().builtin.c_str(), ratio);
    }
    std::mt19937_64 rng(opts.seed);
    double worst = 0.0;
    for (int i = 0; i < opts.random_expressions; ++i) {
      const std::string text = random_expression(rng, 4);
      // Print and re-parse so the round trip is part of what is checked.
      const std::string printed = to_string(*parse_expression(text));
      // Bare theta is not 2pi-periodic, so random expressions live on an
      // open interval rather than the circle.
      PotentialSpec ps = PotentialSpec::from_expression(printed, 1.0);
      ps.domain = std::make_pair(-3.0, 3.0);
      PotentialSpec qs = ps;
      qs.expr = text;
      const Potential p = compile(ps);
      const Potential q = compile(qs);
      for (double x : {-2.1, 0.3, 2.2}) {
        ok = ok && std::abs(p.eval(x).value - q.eval(x).value) <= 1e-12 * std::max(1.0, std::abs(q.eval(x).value));
      }
      worst = std::max(worst, fd_ratio(p, grid_for(p.domain(), opts.grid), opts.step, opts.tol));
    }
    ok = ok && worst <= 1.0;
    r.detail += format("%d random expressions worst/tol %.2e", opts.random_expressions, worst);
    r.passed = ok;
  });
}

namespace {

struct ManifoldStart {
  const Potential* pot;
  ManifoldState m;
};

std::vector<ManifoldStart> manifold_starts(const Potential& a, const Potential& b, int n,
                                           std::uint64_t seed, bool attracting_side) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  std::vector<ManifoldStart> out;
  for (int i = 0; i < n; ++i) {
    const Potential& pot = i < n / 2 ? a : b;
    const double th = 2.0 * M_PI * U(rng);
    const double vmax = std::sqrt(-2.0 * pot.eval(th).value);
    const double w = (-0.9 + 1.8 * U(rng)) * vmax;
    double sign = U(rng) < 0.5 ? -1.0 : 1.0;
    // On the collision manifold dz/dtau = -beta v z off it, so beta v >= 0
    // is the side where the manifold attracts.
    if (attracting_side) sign = pot.beta() > 0 ? 1.0 : -1.0;
    const double v = sign * std::sqrt(std::max(0.0, vmax * vmax - w * w));
    out.push_back({&pot, {th, v, w}});
  }
  return out;
}

}  // namespace

CheckResult gradient_like(const ManifoldOrbitOptions& opts) {
  return timed("v nondecreasing on the collision manifold", [&](CheckResult& r) {
    const Potential a = yoshida_g4();
    const Potential b = trig_minus1();
    const auto starts = manifold_starts(a, b, opts.orbits, opts.seed, false);
    const auto results = parallel_map(opts.orbits, [&](int i) {
      const ManifoldStart& s = starts[static_cast<std::size_t>(i)];
      ManifoldOptions mo;
      mo.rtol = opts.rtol;
      mo.atol = opts.atol;
      mo.project = true;
      const ManifoldTrajectory tr = integrate_manifold(s.m, *s.pot, 0.0, opts.tau_end, mo);
      double worst_drop = 0.0;
      for (std::size_t k = 1; k < tr.samples.size(); ++k) {
        worst_drop = std::max(worst_drop, tr.samples[k - 1].v - tr.samples[k].v);
      }
      return std::pair{tr.termination == Termination::SpanEnd, worst_drop};
    });
    int complete = 0;
    double worst = 0.0;
    for (const auto& [done, drop] : results) {
      complete += done;
      worst = std::max(worst, drop);
    }
    r.passed = complete == opts.orbits && worst <= 1e-10;
    r.detail = format("%d/%d orbits reached tau=%g (yoshida_g(4) beta=4, trig beta=-1), largest decrease of v %.3e",
                      complete, opts.orbits, opts.tau_end, worst);
  });
}

CheckResult manifold_invariance(const ManifoldOrbitOptions& opts) {
  return timed("collision manifold invariance", [&](CheckResult& r) {
    // beta > 0 and v >= 0 keeps beta v >= 0 for the whole orbit because v
    // only grows; for beta < 0 the orbit would cross to the repelling side.
    const Potential a = yoshida_g4();
    const auto starts = manifold_starts(a, a, opts.orbits, opts.seed + 1, true);
    const auto results = parallel_map(opts.orbits, [&](int i) {
      const ManifoldStart& s = starts[static_cast<std::size_t>(i)];
      ManifoldOptions mo;
      mo.rtol = opts.rtol;
      mo.atol = opts.atol;
      const ManifoldTrajectory tr = integrate_manifold(s.m, *s.pot, 0.0, opts.tau_end, mo);
      const double z0 = std::abs(tr.samples.front().z);
      return std::tuple{tr.termination == Termination::SpanEnd, z0, tr.max_abs_z};
    });
    int complete = 0;
    double worst_z0 = 0.0, worst = 0.0;
    for (const auto& [done, z0, zmax] : results) {
      complete += done;
      worst_z0 = std::max(worst_z0, z0);
      worst = std::max(worst, zmax);
    }
    r.passed = complete == opts.orbits && worst_z0 <= 1e-12 && worst <= 1e-9;
    r.detail = format("%d/%d orbits reached tau=%g, max |z(0)| %.2e, max |z| %.3e", complete,
                      opts.orbits, opts.tau_end, worst_z0, worst);
  });
}

std::vector<CheckResult> run_suite() {
  std::vector<CheckResult> out;
  out.push_back(jet_vs_finite_differences());
  out.push_back(energy_conservation());
  out.push_back(manifold_invariance());
  out.push_back(gradient_like());
  out.push_back(flow_equivalence());
  out.push_back(isosceles_threshold());
  out.push_back(yoshida_thresholds());
  return out;
}

}  // namespace blowup::validation
