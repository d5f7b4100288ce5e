#include <cmath>

#include <benchmark/benchmark.h>

#include "blowup/certifier.hpp"
#include "blowup/mcgehee.hpp"
#include "blowup/ode.hpp"
#include "blowup/potential.hpp"

namespace {

using namespace blowup;

Potential isosceles(double alpha) { return compile(PotentialSpec::from_builtin("isosceles", {{"alpha", alpha}})); }
Potential yoshida_g(double eps) { return compile(PotentialSpec::from_builtin("yoshida_g", {{"epsilon", eps}})); }

void BM_JetEvalBuiltin(benchmark::State& state) {
  const Potential p = isosceles(1);
  double th = -0.7;
  for (auto _ : state) {
    benchmark::DoNotOptimize(p.eval(th));
    th = th > 0.7 ? -0.7 : th + 1e-3;
  }
}
BENCHMARK(BM_JetEvalBuiltin);

void BM_JetEvalExpression(benchmark::State& state) {
  const Potential p = compile(PotentialSpec::from_expression(
      "-(cos(theta)^4+sin(theta)^4)/4 - (e/2)*cos(theta)^2*sin(theta)^2", 4.0, {{"e", 4.0}}));
  double th = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(p.eval(th));
    th += 1e-3;
  }
}
BENCHMARK(BM_JetEvalExpression);

void BM_Certify(benchmark::State& state) {
  const Potential p = state.range(0) == 0 ? isosceles(13) : yoshida_g(4);
  for (auto _ : state) benchmark::DoNotOptimize(certify(p));
}
BENCHMARK(BM_Certify)->Arg(0)->Arg(1)->Unit(benchmark::kMicrosecond);

void BM_SweepIsosceles(benchmark::State& state) {
  const PotentialSpec fam = PotentialSpec::from_builtin("isosceles", {{"alpha", 1.0}});
  SweepOptions o;
  o.workers = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(sweep_threshold(fam, "alpha", 1, 20, o));
}
BENCHMARK(BM_SweepIsosceles)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

// Bare Dormand-Prince on a harmonic oscillator, to separate stepper cost
// from vector-field cost.
void BM_Dopri5Oscillator(benchmark::State& state) {
  ode::Control<double> c;
  c.rtol = 1e-10;
  for (auto _ : state) {
    auto res = ode::integrate(
        [](double, const ode::State<double, 2>& y) { return ode::State<double, 2>{y[1], -y[0]}; }, 0.0, 100.0,
        ode::State<double, 2>{1.0, 0.0}, c);
    benchmark::DoNotOptimize(res);
  }
}
BENCHMARK(BM_Dopri5Oscillator)->Unit(benchmark::kMicrosecond);

void BM_IntegrateMcGehee(benchmark::State& state) {
  const Potential p = yoshida_g(4);
  IntegrateOptions o;
  o.record_steps = false;
  for (auto _ : state) benchmark::DoNotOptimize(integrate({1.0, 0.3, 0.1, 0.2}, p, 0.0, 20.0, o));
}
BENCHMARK(BM_IntegrateMcGehee)->Unit(benchmark::kMicrosecond);

void BM_TraceManifold(benchmark::State& state) {
  const Potential p = yoshida_g(4);
  const Equilibrium eq = make_equilibrium(p, 0.0, -1);
  TraceOptions o;
  o.direction = 1;
  for (auto _ : state) benchmark::DoNotOptimize(trace_invariant_manifold(eq, Branch::Stable, p, o));
}
BENCHMARK(BM_TraceManifold)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
