// Separatrix tracing on the collision manifold.
//
// The interesting part of a spiral happens at distances far below double
// precision: a slow focus such as yoshida_g(4) turns only ~0.26 rad per e-fold
// of contraction. The orbit is therefore integrated in quad precision, in
// coordinates (dtheta, dv, w) measured from the target equilibrium, with the
// equilibrium itself refined in quad. Two details keep the small displacement
// meaningful:
//   * the constant parts of dv/dtau cancel analytically (v0^2 = -2 V0), so only
//     displacement terms are evaluated;
//   * V(theta0 + d) - V(theta0) and V'(theta0 + d) lose everything to
//     cancellation (or carry ~1e-34 absolute noise) when d is tiny, so below a
//     threshold they come from trapezoid rules on V'' and V' instead. With
//     V'(theta0) and z(target) taken as exactly zero the origin is an exact
//     equilibrium of the relative field, and the field stays smooth down to
//     distances far below the quad epsilon.

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/constants/constants.hpp>

#include "blowup/error.hpp"
#include "blowup/mcgehee.hpp"
#include "blowup/ode.hpp"
#include "blowup/scalar.hpp"

namespace blowup {

namespace {

using Q = quad;
using QS = ode::State<Q, 3>;

const Q kTwoPi = 2 * boost::math::constants::pi<Q>();

Q refine_critical(const Potential& pot, double theta) {
  Q x = theta;
  for (int i = 0; i < 40; ++i) {
    const Jet2<Q> j = pot.eval<Q>(x);
    if (j.d2 == 0) break;
    const Q step = j.d1 / j.d2;
    x -= step;
    if (abs(step) <= 1e-33 * std::max(1.0, std::abs(theta))) break;
  }
  return x;
}

struct Anchor {
  Q theta;
  Q V;
  Q V1;
  Q V2;
  Q v0;
};

Anchor make_anchor(const Potential& pot, double theta, int sign) {
  Anchor a;
  a.theta = refine_critical(pot, theta);
  const Jet2<Q> j = pot.eval<Q>(a.theta);
  a.V = j.value;
  a.V1 = j.d1;
  a.V2 = j.d2;
  a.v0 = sign * sqrt(-2 * j.value);
  return a;
}

// Coordinates relative to the target; all arithmetic in quad.
class RelativeField {
 public:
  RelativeField(const Potential& pot, const Anchor& target) : pot_(pot), t_(target) {}

  // V(theta0 + d) - V(theta0) together with V'(theta0 + d).
  std::pair<Q, Q> delta_V(const Q& d) const {
    const Jet2<Q> j = pot_.eval<Q>(t_.theta + d);
    const Q ad = abs(d);
    if (ad >= Q(1e-4)) return {j.value - t_.V, j.d1};
    const Q V1 = ad >= Q(1e-8) ? j.d1 : d * (t_.V2 + j.d2) / 2;
    return {d * V1 / 2 - d * d * (j.d2 - t_.V2) / 12, V1};
  }

  QS operator()(const QS& y) const {
    const Q beta = pot_.beta();
    const auto [dV, V1] = delta_V(y[0]);
    const Q v = t_.v0 + y[1];
    return {y[2], -beta * t_.v0 * y[1] - beta / 2 * y[1] * y[1] + y[2] * y[2] - beta * dV,
            -(beta / 2 + 1) * v * y[2] - V1};
  }

  Q z(const QS& y) const {
    const Q dV = delta_V(y[0]).first;
    return c0_ + t_.v0 * y[1] + y[1] * y[1] / 2 + y[2] * y[2] / 2 + dV;
  }

  // Moves dv so that z = 0, keeping the sign of v.
  bool project(QS& y) const {
    const Q c = c0_ + y[2] * y[2] / 2 + delta_V(y[0]).first;
    const Q rad = t_.v0 * t_.v0 - 2 * c;
    if (rad < 0) return false;
    const Q v = t_.v0 + y[1];
    const Q root = sqrt(rad);
    if ((v < 0) == (t_.v0 < 0)) {
      // Stable root of dv^2/2 + v0 dv + c = 0 on the same branch as v0.
      y[1] = -2 * c / (t_.v0 + (t_.v0 < 0 ? -root : root));
    } else {
      y[1] = (v < 0 ? -root : root) - t_.v0;
    }
    return true;
  }

  const Anchor& target() const { return t_; }

 private:
  const Potential& pot_;
  Anchor t_;
  Q c0_ = 0;  // z at the target, zero by construction
};

double angular_gap(const Domain& dom, double from, double to, int direction) {
  double d = direction * (to - from);
  if (dom.periodic) {
    d = std::fmod(d, 2 * M_PI);
    if (d < 0) d += 2 * M_PI;
  }
  return d;
}

Equilibrium choose_target(const Potential& pot, const Equilibrium& src, const TraceOptions& opts,
                          double& unwrapped_theta) {
  const Domain& dom = pot.domain();
  if (opts.target_theta) {
    const Equilibrium eq = make_equilibrium(pot, *opts.target_theta, src.sign);
    unwrapped_theta = *opts.target_theta;
    return eq;
  }
  const EquilibriaReport all = find_equilibria(pot);
  const Equilibrium* best = nullptr;
  double best_gap = 0.0;
  for (int pass = 0; pass < 2 && best == nullptr; ++pass) {
    for (const Equilibrium& eq : all.equilibria) {
      if (eq.sign != src.sign) continue;
      const bool focus =
          eq.type == EquilibriumType::StableFocus || eq.type == EquilibriumType::UnstableFocus;
      if (pass == 0 && !focus) continue;
      const double gap = angular_gap(dom, src.theta_c, eq.theta_c, opts.direction);
      if (!(gap > 1e-9)) continue;
      if (best == nullptr || gap < best_gap) {
        best = &eq;
        best_gap = gap;
      }
    }
  }
  if (best == nullptr) {
    throw Error(ErrorCode::InvalidArgument, "no equilibrium of the same sign in that direction");
  }
  unwrapped_theta = src.theta_c + opts.direction * best_gap;
  return *best;
}

}  // namespace

ManifoldTrace trace_invariant_manifold(const Equilibrium& eq, Branch branch, const Potential& pot,
                                       const TraceOptions& opts) {
  if (eq.type != EquilibriumType::Saddle) {
    throw Error(ErrorCode::NotSaddle, "separatrices exist only at saddles on the manifold");
  }
  if (opts.direction != 1 && opts.direction != -1) {
    throw Error(ErrorCode::InvalidArgument, "direction must be +1 or -1");
  }
  ManifoldTrace out;
  out.source = eq;
  double target_theta = 0.0;
  out.target = choose_target(pot, eq, opts, target_theta);

  const Anchor src = make_anchor(pot, eq.theta_c, eq.sign);
  // The target is refined at the unwrapped angle so dtheta stays continuous.
  const Anchor tgt = make_anchor(pot, target_theta, eq.sign);
  const RelativeField field(pot, tgt);

  // Tangent eigenvalue of the chosen branch, recomputed in quad.
  const Q beta = pot.beta();
  const Q a = -(beta / 2 + 1) * src.v0;
  const Q disc = a * a - 4 * src.V2;
  const Q q = (a + (a < 0 ? -sqrt(disc) : sqrt(disc))) / 2;
  Q lp = q;
  Q lm = src.V2 / q;
  if (lp < lm) std::swap(lp, lm);
  const Q lambda = branch == Branch::Unstable ? lp : lm;
  const Q norm = sqrt(1 + lambda * lambda);

  QS y{src.theta - tgt.theta, src.v0 - tgt.v0, Q(0)};
  if (opts.offset != 0.0) {
    const Q off = Q(opts.offset) * opts.direction / norm;
    y[0] += off;
    y[2] += off * lambda;
    field.project(y);
  }

  auto to_sample = [&](const Q& tau, const QS& s) {
    TrajectorySample smp;
    smp.tau = static_cast<double>(tau);
    smp.t = std::numeric_limits<double>::quiet_NaN();
    smp.r = smp.t;
    smp.h = smp.t;
    smp.theta = static_cast<double>(tgt.theta + s[0]);
    smp.v = static_cast<double>(tgt.v0 + s[1]);
    smp.w = static_cast<double>(s[2]);
    smp.z = static_cast<double>(field.z(s));
    return smp;
  };
  auto distance = [](const QS& s) { return sqrt(s[0] * s[0] + s[1] * s[1] + s[2] * s[2]); };

  out.seed = {static_cast<double>(tgt.theta + y[0]), static_cast<double>(tgt.v0 + y[1]),
              static_cast<double>(y[2])};
  out.trajectory.samples.push_back(to_sample(Q(0), y));

  Q prev_angle = atan2(y[2], y[0]);
  Q swept = 0;
  Q swept_near = 0;
  Q min_dist = distance(y);
  bool inside = min_dist <= opts.near_radius;
  Q last_dist = min_dist;

  ode::Control<Q> ctl;
  ctl.rtol = opts.rtol;
  ctl.atol = Q(1e-60);
  ctl.h_max = Q(M_PI / 8);
  ctl.norm_scaled = true;

  auto rhs = [&](const Q&, const QS& s) { return field(s); };
  auto on_step = [&](const ode::DenseStep<Q, 3>& dense, const Q& tau, QS& s) {
    // Sub-sample the step so the unwrapped angle never misses a half turn.
    constexpr int kSub = 8;
    for (int k = 1; k <= kSub; ++k) {
      const QS p = k == kSub ? s : dense(dense.t0 + dense.h * k / kSub);
      const Q ang = atan2(p[2], p[0]);
      Q d = ang - prev_angle;
      if (d > kTwoPi / 2) d -= kTwoPi;
      if (d < -kTwoPi / 2) d += kTwoPi;
      swept += d;
      if (inside) swept_near += d;
      prev_angle = ang;
      const Q dist = distance(p);
      if (dist <= opts.near_radius) inside = true;
      min_dist = std::min(min_dist, dist);
    }
    field.project(s);
    last_dist = distance(s);
    out.trajectory.samples.push_back(to_sample(tau, s));
    return last_dist < opts.stop_distance ? ode::StepAction::Stop : ode::StepAction::Continue;
  };

  const Q tau1 = branch == Branch::Unstable ? Q(opts.max_tau) : Q(-opts.max_tau);
  const auto res = ode::integrate<Q, 3>(rhs, Q(0), tau1, y, ctl, on_step);
  out.trajectory.rejected_steps = res.rejected;
  switch (res.status) {
    case ode::Status::Stopped:
      out.trajectory.termination = Termination::ReachedEquilibrium;
      break;
    case ode::Status::Completed:
      out.trajectory.termination = Termination::SpanEnd;
      break;
    default:
      out.trajectory.termination = pot.domain().periodic ? Termination::StepUnderflow
                                   : pot.domain().contains(out.trajectory.samples.back().theta)
                                       ? Termination::StepUnderflow
                                       : Termination::LeftDomain;
  }
  out.trajectory.terminal_distance = static_cast<double>(last_dist);
  out.swept_angle = static_cast<double>(abs(swept));
  out.swept_angle_near = static_cast<double>(abs(swept_near));
  out.min_distance = static_cast<double>(min_dist);
  out.spiral = out.swept_angle_near >= 4 * M_PI && out.min_distance <= opts.near_radius;
  return out;
}

}  // namespace blowup
