#include <algorithm>
#include <cmath>

#include "blowup/error.hpp"
#include "blowup/mcgehee.hpp"
#include "blowup/ode.hpp"

namespace blowup {

std::array<double, 4> cartesian_vector_field(const Vec2& p, const Vec2& q, const Potential& pot) {
  const Vec2 g = pot.grad_U(q);
  return {p[0], p[1], -g[0], -g[1]};
}

double cartesian_energy(const Vec2& p, const Vec2& q, const Potential& pot) {
  return 0.5 * (p[0] * p[0] + p[1] * p[1]) + pot.eval_U(q);
}

CartesianTrajectory integrate_cartesian(const Vec2& p0, const Vec2& q0, const Potential& pot,
                                        double t0, double t1, const CartesianOptions& opts) {
  using S = ode::State<double, 4>;
  // Validates q0 (origin and domain) up front so bad input is an error rather
  // than an immediate step underflow.
  cartesian_vector_field(p0, q0, pot);

  bool left_domain = false;
  auto rhs = [&](double, const S& y) -> S {
    const Vec2 q{y[0], y[1]};
    if (!pot.to_domain(std::atan2(q[1], q[0]))) left_domain = true;
    const auto d = cartesian_vector_field({y[2], y[3]}, q, pot);
    left_domain = false;
    return {d[0], d[1], d[2], d[3]};
  };
  auto sample = [&](double t, const S& y) {
    CartesianSample s;
    s.t = t;
    s.q = {y[0], y[1]};
    s.p = {y[2], y[3]};
    s.H = cartesian_energy(s.p, s.q, pot);
    return s;
  };

  CartesianTrajectory traj;
  const S y0{q0[0], q0[1], p0[0], p0[1]};
  traj.samples.push_back(sample(t0, y0));

  const double dir = t1 >= t0 ? 1.0 : -1.0;
  std::vector<double> outputs = opts.output_times;
  std::erase_if(outputs,
                [&](double x) { return dir * (x - t0) <= 0.0 || dir * (x - t1) > 0.0; });
  std::sort(outputs.begin(), outputs.end(), [&](double a, double b) { return dir * a < dir * b; });
  std::size_t next = 0;

  ode::Control<double> ctl;
  ctl.rtol = opts.rtol;
  ctl.atol = opts.atol;
  ctl.h_max = opts.h_max;
  auto on_step = [&](const ode::DenseStep<double, 4>& dense, double t, S& y) {
    while (next < outputs.size() && dir * (outputs[next] - t) < 0.0) {
      traj.samples.push_back(sample(outputs[next], dense(outputs[next])));
      ++next;
    }
    const bool requested = next < outputs.size() && outputs[next] == t;
    if (requested) ++next;
    if (opts.record_steps || requested) traj.samples.push_back(sample(t, y));
    return ode::StepAction::Continue;
  };
  const auto res = ode::integrate<double, 4>(rhs, t0, t1, y0, ctl, on_step);
  switch (res.status) {
    case ode::Status::Completed:
    case ode::Status::Stopped:
      traj.termination = Termination::SpanEnd;
      break;
    default:
      traj.termination = left_domain ? Termination::LeftDomain : Termination::StepUnderflow;
  }
  if (!opts.record_steps && traj.samples.back().t != res.t) {
    traj.samples.push_back(sample(res.t, res.y));
  }
  return traj;
}

double beta_minus2_G(const CartesianSample& s) {
  const double qp = s.q[0] * s.p[0] + s.q[1] * s.p[1];
  const double qq = s.q[0] * s.q[0] + s.q[1] * s.q[1];
  return qp * qp - 2.0 * qq * s.H;
}

double check_beta_minus2_integral(const CartesianTrajectory& traj) {
  if (traj.samples.empty()) return 0.0;
  const double g0 = beta_minus2_G(traj.samples.front());
  double dev = 0.0;
  for (const CartesianSample& s : traj.samples) {
    dev = std::max(dev, std::abs(beta_minus2_G(s) - g0));
  }
  return dev;
}

}  // namespace blowup
