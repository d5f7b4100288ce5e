#pragma once

#include <array>
#include <complex>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "blowup/critical_points.hpp"
#include "blowup/potential.hpp"

namespace blowup {

/// Blown-up coordinates: q = r(cos theta, sin theta),
/// p = r^{beta/2} (v e_r + w e_theta), dt = r^{1 - beta/2} dtau.
struct McGeheeState {
  double r = 1.0;
  double theta = 0.0;
  double v = 0.0;
  double w = 0.0;
};

/// A point of the (theta, v, w) subsystem, which does not involve r.
struct ManifoldState {
  double theta = 0.0;
  double v = 0.0;
  double w = 0.0;
};

struct PhaseState {
  Vec2 p{};
  Vec2 q{};
};

McGeheeState to_mcgehee(const Vec2& p, const Vec2& q, double beta);
PhaseState from_mcgehee(const McGeheeState& s, double beta);

/// (dr, dtheta, dv, dw) with respect to tau.
std::array<double, 4> vector_field(const McGeheeState& s, const Potential& pot);
std::array<double, 3> manifold_field(const ManifoldState& m, const Potential& pot);

/// z = (v^2 + w^2)/2 + V(theta); zero exactly on the collision manifold.
double z_value(double theta, double v, double w, const Potential& pot);
/// h = r^beta z, the conserved Hamiltonian.
double energy(const McGeheeState& s, const Potential& pot);

enum class Termination { SpanEnd, StepUnderflow, LeftDomain, ReachedEquilibrium };
std::string_view to_string(Termination t) noexcept;

struct TrajectorySample {
  double tau = 0.0;
  double t = 0.0;  // NaN for (theta, v, w) orbits, which carry no r
  double r = 0.0;  // NaN for (theta, v, w) orbits
  double theta = 0.0;
  double v = 0.0;
  double w = 0.0;
  double z = 0.0;
  double h = 0.0;  // NaN for (theta, v, w) orbits
};

struct Trajectory {
  std::vector<TrajectorySample> samples;
  Termination termination = Termination::SpanEnd;
  /// Distance to the target equilibrium when termination is ReachedEquilibrium.
  double terminal_distance = 0.0;
  long rejected_steps = 0;
};

struct IntegrateOptions {
  double rtol = 1e-10;
  double atol = 1e-12;
  double h_max = M_PI / 8;
  /// Extra samples from the dense output, in integration order.
  std::vector<double> output_taus;
  /// Stop once the physical time t passes this value (full-state orbits only).
  std::optional<double> t_limit;
  /// Record every accepted step (output_taus are recorded regardless).
  bool record_steps = true;
};

/// Integrates the full (r, theta, v, w) system with t carried as a fifth
/// component. tau1 < tau0 integrates backwards.
Trajectory integrate(const McGeheeState& s0, const Potential& pot, double tau0, double tau1,
                     const IntegrateOptions& opts = {});

struct ManifoldOptions : IntegrateOptions {
  /// Pull v back onto z = 0 after every accepted step. Needed when the flow
  /// repels from the collision manifold in the integration direction.
  bool project = false;
};

struct ManifoldTrajectory : Trajectory {
  double max_abs_z = 0.0;
};

ManifoldTrajectory integrate_manifold(const ManifoldState& m0, const Potential& pot, double tau0,
                                      double tau1, const ManifoldOptions& opts = {});

/// Moves v so that z = 0 while keeping theta, w and the sign of v.
/// Fails (returns nullopt) where (w^2/2 + V) > 0 leaves no real solution.
std::optional<ManifoldState> project_to_manifold(const ManifoldState& m, const Potential& pot);

enum class EquilibriumType { Saddle, StableFocus, UnstableFocus, Node };
std::string_view to_string(EquilibriumType t) noexcept;

struct EigenData {
  std::array<std::array<double, 3>, 3> matrix{};
  double lambda1 = 0.0;
  std::array<double, 3> eigvec1{0.0, 1.0, 0.0};
  /// Eigenvalues of the restriction to the manifold; real pairs sorted descending.
  std::array<std::complex<double>, 2> lambda23{};
  /// Tangent eigenvectors (dtheta, dv, dw) = (1, 0, lambda), unnormalized.
  std::array<std::array<std::complex<double>, 3>, 2> eigvec23{};
  EquilibriumType type = EquilibriumType::Node;
};

struct Equilibrium {
  double theta_c = 0.0;
  int sign = -1;  // +1 or -1
  double v_star = 0.0;
  double V = 0.0;
  double V2 = 0.0;
  double lambda1 = 0.0;
  std::array<std::complex<double>, 2> lambda23{};
  std::array<double, 3> eigvec1{0.0, 1.0, 0.0};
  EquilibriumType type = EquilibriumType::Node;
};

/// Equilibrium lift of one critical point; V(theta_c) must be negative.
Equilibrium make_equilibrium(const Potential& pot, double theta_c, int sign);

EigenData linearize(const Equilibrium& eq, const Potential& pot);

struct EquilibriaReport {
  std::vector<Equilibrium> equilibria;  // D- then D+ for each critical point
  std::vector<CriticalPoint> skipped;   // critical points with V >= 0
};

EquilibriaReport find_equilibria(const Potential& pot, const CriticalPointOptions& opts = {});

enum class Branch { Unstable, Stable };

struct TraceOptions {
  double offset = 1e-7;
  /// +1 or -1: which half of the eigenvector line, by the sign of dtheta.
  int direction = 1;
  double max_tau = 200.0;
  /// Angle of the equilibrium to measure winding around. Default: the nearest
  /// focus of the same sign in the seeding direction.
  std::optional<double> target_theta;
  double rtol = 1e-12;
  double stop_distance = 1e-30;
  /// Winding is also counted separately once inside this ball.
  double near_radius = 1e-3;
};

struct ManifoldTrace {
  Trajectory trajectory;
  Equilibrium source;
  Equilibrium target;
  ManifoldState seed;
  double swept_angle = 0.0;       // over the whole orbit
  double swept_angle_near = 0.0;  // after first entering near_radius
  double min_distance = 0.0;
  bool spiral = false;  // swept_angle_near >= 4 pi and min_distance <= near_radius
};

/// Follows one branch of the stable or unstable manifold of a saddle on the
/// collision manifold; stable branches are integrated backwards in tau. Runs
/// in quad precision in coordinates centred on the target so the winding can
/// be resolved far below double-precision distances.
ManifoldTrace trace_invariant_manifold(const Equilibrium& eq, Branch branch, const Potential& pot,
                                       const TraceOptions& opts = {});

struct CartesianSample {
  double t = 0.0;
  Vec2 q{};
  Vec2 p{};
  double H = 0.0;
};

struct CartesianTrajectory {
  std::vector<CartesianSample> samples;
  Termination termination = Termination::SpanEnd;
};

struct CartesianOptions {
  double rtol = 1e-10;
  double atol = 1e-12;
  double h_max = M_PI / 8;
  std::vector<double> output_times;
  bool record_steps = true;
};

/// (dq/dt, dp/dt) = (p, -grad U(q)) packed as (q1', q2', p1', p2').
std::array<double, 4> cartesian_vector_field(const Vec2& p, const Vec2& q, const Potential& pot);
double cartesian_energy(const Vec2& p, const Vec2& q, const Potential& pot);

CartesianTrajectory integrate_cartesian(const Vec2& p0, const Vec2& q0, const Potential& pot,
                                        double t0, double t1, const CartesianOptions& opts = {});

/// max |G(t) - G(0)| with G = (q.p)^2 - 2|q|^2 H, a first integral when beta = -2.
double check_beta_minus2_integral(const CartesianTrajectory& traj);
double beta_minus2_G(const CartesianSample& s);

}  // namespace blowup
