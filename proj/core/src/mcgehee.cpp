#include "blowup/mcgehee.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "blowup/error.hpp"
#include "blowup/ode.hpp"

namespace blowup {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Evaluates V on behalf of an integrator stage and remembers whether the last
// failure was a departure from an open domain, so underflow can be reported
// as LeftDomain instead.
class GuardedV {
 public:
  explicit GuardedV(const Potential& pot) : pot_(pot) {}

  Jet2<double> operator()(double theta) {
    if (!pot_.domain().periodic && !pot_.domain().contains(theta)) {
      left_domain_ = true;
      throw Error(ErrorCode::DomainError, "theta left the potential's domain");
    }
    try {
      return pot_.eval(theta);
    } catch (const Error&) {
      left_domain_ = false;
      throw;
    }
  }

  void reset() { left_domain_ = false; }
  bool left_domain() const { return left_domain_; }

 private:
  const Potential& pot_;
  bool left_domain_ = false;
};

Termination termination_of(ode::Status status, bool left_domain) {
  switch (status) {
    case ode::Status::Completed:
    case ode::Status::Stopped:
      return Termination::SpanEnd;
    case ode::Status::StepUnderflow:
    case ode::Status::MaxSteps:
      return left_domain ? Termination::LeftDomain : Termination::StepUnderflow;
  }
  return Termination::StepUnderflow;
}

// Requested dense-output taus strictly inside (tau0, tau1], in integration order.
std::vector<double> ordered_outputs(std::vector<double> taus, double tau0, double tau1) {
  const double dir = tau1 >= tau0 ? 1.0 : -1.0;
  std::erase_if(taus, [&](double x) { return dir * (x - tau0) <= 0.0 || dir * (x - tau1) > 0.0; });
  std::sort(taus.begin(), taus.end(), [&](double a, double b) { return dir * a < dir * b; });
  return taus;
}

}  // namespace

McGeheeState to_mcgehee(const Vec2& p, const Vec2& q, double beta) {
  const double r = std::hypot(q[0], q[1]);
  if (r == 0.0) throw Error(ErrorCode::OriginSingularity, "q = 0 has no polar angle");
  const double theta = std::atan2(q[1], q[0]);
  const double c = q[0] / r;
  const double s = q[1] / r;
  const double scale = std::pow(r, -0.5 * beta);
  return {r, theta, scale * (p[0] * c + p[1] * s), scale * (-p[0] * s + p[1] * c)};
}

PhaseState from_mcgehee(const McGeheeState& st, double beta) {
  if (!(st.r > 0.0)) throw Error(ErrorCode::OriginSingularity, "r must be positive");
  const double c = std::cos(st.theta);
  const double s = std::sin(st.theta);
  const double scale = std::pow(st.r, 0.5 * beta);
  PhaseState out;
  out.q = {st.r * c, st.r * s};
  out.p = {scale * (st.v * c - st.w * s), scale * (st.v * s + st.w * c)};
  return out;
}

std::array<double, 4> vector_field(const McGeheeState& s, const Potential& pot) {
  const auto m = manifold_field({s.theta, s.v, s.w}, pot);
  return {s.r * s.v, m[0], m[1], m[2]};
}

std::array<double, 3> manifold_field(const ManifoldState& m, const Potential& pot) {
  const double beta = pot.beta();
  const Jet2<double> V = pot.eval(m.theta);
  return {m.w, -0.5 * beta * m.v * m.v + m.w * m.w - beta * V.value,
          -(0.5 * beta + 1.0) * m.v * m.w - V.d1};
}

double z_value(double theta, double v, double w, const Potential& pot) {
  return 0.5 * (v * v + w * w) + pot.eval(theta).value;
}

double energy(const McGeheeState& s, const Potential& pot) {
  return std::pow(s.r, pot.beta()) * z_value(s.theta, s.v, s.w, pot);
}

std::string_view to_string(Termination t) noexcept {
  switch (t) {
    case Termination::SpanEnd: return "span_end";
    case Termination::StepUnderflow: return "step_underflow";
    case Termination::LeftDomain: return "left_domain";
    case Termination::ReachedEquilibrium: return "reached_equilibrium";
  }
  return "unknown";
}

std::string_view to_string(EquilibriumType t) noexcept {
  switch (t) {
    case EquilibriumType::Saddle: return "saddle";
    case EquilibriumType::StableFocus: return "stable_focus";
    case EquilibriumType::UnstableFocus: return "unstable_focus";
    case EquilibriumType::Node: return "node";
  }
  return "unknown";
}

Trajectory integrate(const McGeheeState& s0, const Potential& pot, double tau0, double tau1,
                     const IntegrateOptions& opts) {
  if (!(s0.r > 0.0)) throw Error(ErrorCode::OriginSingularity, "r must be positive");
  if (!pot.domain().periodic && !pot.domain().contains(s0.theta)) {
    throw Error(ErrorCode::DomainError, "initial theta outside the potential's domain");
  }
  using S = ode::State<double, 5>;
  const double beta = pot.beta();
  GuardedV V(pot);

  auto rhs = [&](double, const S& y) -> S {
    if (!(y[0] > 0.0)) throw Error(ErrorCode::DomainError, "r left (0, inf)");
    const Jet2<double> j = V(y[1]);
    return {y[0] * y[2], y[3], -0.5 * beta * y[2] * y[2] + y[3] * y[3] - beta * j.value,
            -(0.5 * beta + 1.0) * y[2] * y[3] - j.d1, std::pow(y[0], 1.0 - 0.5 * beta)};
  };

  auto sample = [&](double tau, const S& y) {
    TrajectorySample s;
    s.tau = tau;
    s.r = y[0];
    s.theta = y[1];
    s.v = y[2];
    s.w = y[3];
    s.t = y[4];
    s.z = z_value(y[1], y[2], y[3], pot);
    s.h = std::pow(y[0], beta) * s.z;
    return s;
  };

  Trajectory traj;
  const S y0{s0.r, s0.theta, s0.v, s0.w, 0.0};
  traj.samples.push_back(sample(tau0, y0));
  const std::vector<double> outputs = ordered_outputs(opts.output_taus, tau0, tau1);
  std::size_t next = 0;
  const double dir = tau1 >= tau0 ? 1.0 : -1.0;

  ode::Control<double> ctl;
  ctl.rtol = opts.rtol;
  ctl.atol = opts.atol;
  ctl.h_max = opts.h_max;
  auto on_step = [&](const ode::DenseStep<double, 5>& dense, double tau, S& y) {
    V.reset();
    while (next < outputs.size() && dir * (outputs[next] - tau) < 0.0) {
      traj.samples.push_back(sample(outputs[next], dense(outputs[next])));
      ++next;
    }
    const bool requested = next < outputs.size() && outputs[next] == tau;
    if (requested) ++next;
    if (opts.record_steps || requested) traj.samples.push_back(sample(tau, y));
    if (opts.t_limit && y[4] >= *opts.t_limit) return ode::StepAction::Stop;
    return ode::StepAction::Continue;
  };
  const auto res = ode::integrate<double, 5>(rhs, tau0, tau1, y0, ctl, on_step);
  traj.termination = termination_of(res.status, V.left_domain());
  traj.rejected_steps = res.rejected;
  if (!opts.record_steps && traj.samples.back().tau != res.t) {
    traj.samples.push_back(sample(res.t, res.y));
  }
  return traj;
}

std::optional<ManifoldState> project_to_manifold(const ManifoldState& m, const Potential& pot) {
  const double rad = -2.0 * pot.eval(m.theta).value - m.w * m.w;
  if (rad < 0.0) return std::nullopt;
  return ManifoldState{m.theta, std::copysign(std::sqrt(rad), m.v), m.w};
}

ManifoldTrajectory integrate_manifold(const ManifoldState& m0, const Potential& pot, double tau0,
                                      double tau1, const ManifoldOptions& opts) {
  if (!pot.domain().periodic && !pot.domain().contains(m0.theta)) {
    throw Error(ErrorCode::DomainError, "initial theta outside the potential's domain");
  }
  using S = ode::State<double, 3>;
  const double beta = pot.beta();
  GuardedV V(pot);

  auto rhs = [&](double, const S& y) -> S {
    const Jet2<double> j = V(y[0]);
    return {y[2], -0.5 * beta * y[1] * y[1] + y[2] * y[2] - beta * j.value,
            -(0.5 * beta + 1.0) * y[1] * y[2] - j.d1};
  };
  auto sample = [&](double tau, const S& y) {
    TrajectorySample s;
    s.tau = tau;
    s.t = kNaN;
    s.r = kNaN;
    s.h = kNaN;
    s.theta = y[0];
    s.v = y[1];
    s.w = y[2];
    s.z = z_value(y[0], y[1], y[2], pot);
    return s;
  };

  ManifoldTrajectory traj;
  const S y0{m0.theta, m0.v, m0.w};
  traj.samples.push_back(sample(tau0, y0));
  traj.max_abs_z = std::abs(traj.samples.back().z);
  const std::vector<double> outputs = ordered_outputs(opts.output_taus, tau0, tau1);
  std::size_t next = 0;
  const double dir = tau1 >= tau0 ? 1.0 : -1.0;

  ode::Control<double> ctl;
  ctl.rtol = opts.rtol;
  ctl.atol = opts.atol;
  ctl.h_max = opts.h_max;
  auto on_step = [&](const ode::DenseStep<double, 3>& dense, double tau, S& y) {
    V.reset();
    while (next < outputs.size() && dir * (outputs[next] - tau) < 0.0) {
      traj.samples.push_back(sample(outputs[next], dense(outputs[next])));
      ++next;
    }
    traj.max_abs_z = std::max(traj.max_abs_z, std::abs(z_value(y[0], y[1], y[2], pot)));
    if (opts.project) {
      if (auto p = project_to_manifold({y[0], y[1], y[2]}, pot)) y[1] = p->v;
    }
    const bool requested = next < outputs.size() && outputs[next] == tau;
    if (requested) ++next;
    if (opts.record_steps || requested) traj.samples.push_back(sample(tau, y));
    return ode::StepAction::Continue;
  };
  const auto res = ode::integrate<double, 3>(rhs, tau0, tau1, y0, ctl, on_step);
  traj.termination = termination_of(res.status, V.left_domain());
  traj.rejected_steps = res.rejected;
  if (!opts.record_steps && traj.samples.back().tau != res.t) {
    traj.samples.push_back(sample(res.t, res.y));
  }
  return traj;
}

Equilibrium make_equilibrium(const Potential& pot, double theta_c, int sign) {
  if (sign != 1 && sign != -1) throw Error(ErrorCode::InvalidArgument, "sign must be +1 or -1");
  const Jet2<double> j = pot.eval(theta_c);
  if (!(j.value < 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "V(theta_c) >= 0: no equilibrium on the manifold");
  }
  Equilibrium eq;
  eq.theta_c = theta_c;
  eq.sign = sign;
  eq.V = j.value;
  eq.V2 = j.d2;
  eq.v_star = sign * std::sqrt(-2.0 * j.value);
  const EigenData e = linearize(eq, pot);
  eq.lambda1 = e.lambda1;
  eq.lambda23 = e.lambda23;
  eq.eigvec1 = e.eigvec1;
  eq.type = e.type;
  return eq;
}

EigenData linearize(const Equilibrium& eq, const Potential& pot) {
  const double beta = pot.beta();
  const double root = std::sqrt(-2.0 * eq.V);
  const double s = eq.sign;
  const double a = -s * (0.5 * beta + 1.0) * root;  // trace on the manifold
  const double V2 = eq.V2;

  EigenData e;
  e.matrix = {{{0.0, 0.0, 1.0}, {0.0, -s * beta * root, 0.0}, {-V2, 0.0, a}}};
  e.lambda1 = -s * beta * root;

  // lambda^2 - a lambda + V2 = 0
  const double disc = a * a - 4.0 * V2;
  if (disc >= 0.0) {
    const double q = 0.5 * (a + std::copysign(std::sqrt(disc), a));
    double l2 = q;
    double l3 = q != 0.0 ? V2 / q : 0.0;
    if (l2 < l3) std::swap(l2, l3);
    e.lambda23 = {std::complex<double>(l2, 0.0), std::complex<double>(l3, 0.0)};
    if (V2 < 0.0) {
      e.type = EquilibriumType::Saddle;
    } else {
      e.type = EquilibriumType::Node;
    }
  } else {
    const double im = 0.5 * std::sqrt(-disc);
    e.lambda23 = {std::complex<double>(0.5 * a, im), std::complex<double>(0.5 * a, -im)};
    e.type = a > 0.0 ? EquilibriumType::UnstableFocus : EquilibriumType::StableFocus;
  }
  for (int k = 0; k < 2; ++k) {
    e.eigvec23[k] = {std::complex<double>(1.0), std::complex<double>(0.0), e.lambda23[k]};
  }
  return e;
}

EquilibriaReport find_equilibria(const Potential& pot, const CriticalPointOptions& opts) {
  EquilibriaReport report;
  for (const CriticalPoint& cp : find_critical_points(pot, opts)) {
    if (!(cp.V < 0.0)) {
      report.skipped.push_back(cp);
      continue;
    }
    report.equilibria.push_back(make_equilibrium(pot, cp.theta, -1));
    report.equilibria.push_back(make_equilibrium(pot, cp.theta, +1));
  }
  return report;
}

}  // namespace blowup
