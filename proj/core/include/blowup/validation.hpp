#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace blowup::validation {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

/// Sweep of isosceles alpha over [1, 20]: exactly one threshold at 55/4.
CheckResult isosceles_threshold(double tol = 1e-6);

/// yoshida_g over [-0.9, 0.9] and [1.1, 10] gives -1/8 and 25/7; yoshida_h
/// with the sign flip gives the same values with complexified verdicts.
CheckResult yoshida_thresholds(double tol = 1e-6);

/// The beta = -1 Morales-Ramis members satisfy the necessary inequality and
/// its boundary sits at lambda = 9/8.
CheckResult morales_ramis_consistency();

struct EnergyOptions {
  int orbits = 20;
  double tau_end = 50.0;
  double rtol = 1e-10;
  double atol = 1e-12;
  double tol = 1e-8;
  std::uint64_t seed = 0x5eed0001;
};
/// Relative drift of h = r^beta z along blown-up orbits of isosceles(1) and
/// yoshida_g(4) from random initial states. Every orbit must reach tau_end.
CheckResult energy_conservation(const EnergyOptions& opts = {});

struct FlowEquivalenceOptions {
  int orbits = 10;
  double t_end = 5.0;
  double tol = 1e-6;
  double rtol = 1e-12;
  double atol = 1e-14;
  std::uint64_t seed = 0x5eed0002;
};
/// Cartesian and blown-up integrations of isosceles(1) agree in q(t).
CheckResult flow_equivalence(const FlowEquivalenceOptions& opts = {});

struct FocusOptions {
  int potentials = 200;
  double band = 1e-7;
  std::uint64_t seed = 0x5eed0003;
};
/// Sign of the assumption-6 margin versus complex tangent eigenvalues at D0-.
CheckResult focus_equivalence(const FocusOptions& opts = {});

/// Separatrices of yoshida_g(4) and isosceles(1) wind >= 4 pi around the
/// focus after coming within 1e-3 of it.
CheckResult spiral_demonstration();

struct WitnessOptions {
  int orbits = 5;
  double t_end = 10.0;
  double rtol = 1e-11;
  double atol = 1e-13;
  std::uint64_t seed = 0x5eed0004;
};
/// G = (q.p)^2 - 2|q|^2 H is conserved for beta = -2 and not for beta = -1.
CheckResult beta_minus2_witness(const WitnessOptions& opts = {});

struct JetOptions {
  int grid = 1000;
  int random_expressions = 20;
  double tol = 1e-6;
  /// Largest starting step of the extrapolated central differences. A single
  /// fixed step cannot serve both smooth and near-pole regions: at 1e-4 the
  /// second difference's own roundoff (~eps |V| / h^2) reaches the tolerance.
  double step = 0.1;
  std::uint64_t seed = 0x5eed0005;
};
/// Jet derivatives against central finite differences (Richardson-extrapolated)
/// for both builtins and random expressions.
CheckResult jet_vs_finite_differences(const JetOptions& opts = {});

struct ManifoldOrbitOptions {
  int orbits = 20;
  double tau_end = 30.0;
  double rtol = 1e-12;
  double atol = 1e-14;
  std::uint64_t seed = 0x5eed0006;
};
/// v is nondecreasing (1e-10 slack) along orbits on the collision manifold
/// for beta > -2.
CheckResult gradient_like(const ManifoldOrbitOptions& opts = {});

/// Orbits started within 1e-12 of the collision manifold, on the side where
/// it attracts (beta v >= 0), stay within 1e-9 over tau in [0, 30] without
/// projection.
CheckResult manifold_invariance(const ManifoldOrbitOptions& opts = {});

/// The battery run by `blowup validate`.
std::vector<CheckResult> run_suite();

}  // namespace blowup::validation
