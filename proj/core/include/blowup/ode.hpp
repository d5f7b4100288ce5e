#pragma once

// Dormand-Prince 5(4) with PI step control and the 4th-order continuous
// extension. Templated on the scalar so the manifold tracer can run in quad.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <utility>

#include "blowup/error.hpp"

namespace blowup::ode {

template <typename T, std::size_t N>
using State = std::array<T, N>;

template <typename T>
struct Control {
  T rtol = T(1e-10);
  T atol = T(1e-12);
  T h_max = T(M_PI / 8);
  T safety = T(0.9);
  long max_steps = 10'000'000;
  /// Scale every component's tolerance by the max-norm of the state instead
  /// of the component itself. Useful when components pass through zero.
  bool norm_scaled = false;
};

enum class Status { Completed, Stopped, StepUnderflow, MaxSteps };

enum class StepAction { Continue, Stop };

/// Dense output over one accepted step [t0, t0 + h].
template <typename T, std::size_t N>
struct DenseStep {
  T t0{};
  T h{};
  std::array<State<T, N>, 5> rcont{};

  State<T, N> operator()(T t) const {
    const T s = (t - t0) / h;
    const T s1 = T(1) - s;
    State<T, N> y;
    for (std::size_t i = 0; i < N; ++i) {
      y[i] = rcont[0][i] +
             s * (rcont[1][i] + s1 * (rcont[2][i] + s * (rcont[3][i] + s1 * rcont[4][i])));
    }
    return y;
  }
};

template <typename T, std::size_t N>
struct Result {
  Status status = Status::Completed;
  T t{};
  State<T, N> y{};
  long accepted = 0;
  long rejected = 0;
};

namespace detail {

template <typename T>
struct Tableau {
  static constexpr T c2 = T(1) / 5, c3 = T(3) / 10, c4 = T(4) / 5, c5 = T(8) / 9;
  static constexpr T a21 = T(1) / 5;
  static constexpr T a31 = T(3) / 40, a32 = T(9) / 40;
  static constexpr T a41 = T(44) / 45, a42 = T(-56) / 15, a43 = T(32) / 9;
  static constexpr T a51 = T(19372) / 6561, a52 = T(-25360) / 2187, a53 = T(64448) / 6561,
                     a54 = T(-212) / 729;
  static constexpr T a61 = T(9017) / 3168, a62 = T(-355) / 33, a63 = T(46732) / 5247,
                     a64 = T(49) / 176, a65 = T(-5103) / 18656;
  static constexpr T a71 = T(35) / 384, a73 = T(500) / 1113, a74 = T(125) / 192,
                     a75 = T(-2187) / 6784, a76 = T(11) / 84;
  static constexpr T e1 = T(71) / 57600, e3 = T(-71) / 16695, e4 = T(71) / 1920,
                     e5 = T(-17253) / 339200, e6 = T(22) / 525, e7 = T(-1) / 40;
  static constexpr T d1 = T(-12715105075.0) / T(11282082432.0),
                     d3 = T(87487479700.0) / T(32700410799.0),
                     d4 = T(-10690763975.0) / T(1880347072.0),
                     d5 = T(701980252875.0) / T(199316789632.0),
                     d6 = T(-1453857185.0) / T(822651844.0),
                     d7 = T(69997945.0) / T(29380423.0);
};

template <typename T, std::size_t N>
T error_norm(const State<T, N>& err, const State<T, N>& y0, const State<T, N>& y1,
             const Control<T>& c) {
  using std::abs;
  using std::max;
  using std::sqrt;
  T scale = T(0);
  if (c.norm_scaled) {
    for (std::size_t i = 0; i < N; ++i) scale = max(scale, max(abs(y0[i]), abs(y1[i])));
  }
  T sum = T(0);
  for (std::size_t i = 0; i < N; ++i) {
    const T sc = c.atol + c.rtol * (c.norm_scaled ? scale : max(abs(y0[i]), abs(y1[i])));
    const T q = err[i] / sc;
    sum += q * q;
  }
  return sqrt(sum / T(N));
}

template <typename T, std::size_t N, typename Rhs>
T initial_step(Rhs& f, T t0, const State<T, N>& y0, const State<T, N>& f0, T dir,
               const Control<T>& c) {
  using std::abs;
  using std::max;
  using std::min;
  using std::pow;
  using std::sqrt;
  T scale = T(0);
  for (std::size_t i = 0; i < N; ++i) scale = max(scale, abs(y0[i]));
  auto sc_of = [&](std::size_t i) { return c.atol + c.rtol * (c.norm_scaled ? scale : abs(y0[i])); };
  T dn0 = 0, dn1 = 0;
  for (std::size_t i = 0; i < N; ++i) {
    const T sc = sc_of(i);
    dn0 += (y0[i] / sc) * (y0[i] / sc);
    dn1 += (f0[i] / sc) * (f0[i] / sc);
  }
  dn0 = sqrt(dn0 / T(N));
  dn1 = sqrt(dn1 / T(N));
  T h = (dn0 <= T(1e-10) || dn1 <= T(1e-10)) ? T(1e-6) : T(0.01) * dn0 / dn1;
  h = min(h, c.h_max);
  State<T, N> y1;
  for (std::size_t i = 0; i < N; ++i) y1[i] = y0[i] + dir * h * f0[i];
  T dn2 = 0;
  try {
    const State<T, N> f1 = f(t0 + dir * h, y1);
    for (std::size_t i = 0; i < N; ++i) {
      const T sc = sc_of(i);
      dn2 += ((f1[i] - f0[i]) / sc) * ((f1[i] - f0[i]) / sc);
    }
    dn2 = sqrt(dn2 / T(N)) / h;
  } catch (const Error&) {
    return h * T(0.01);
  }
  const T der = max(dn1, dn2);
  const T h1 = der <= T(1e-15) ? max(T(1e-6), h * T(1e-3)) : pow(T(0.01) / der, T(0.2));
  return min(min(T(100) * h, h1), c.h_max);
}

}  // namespace detail

/// Integrates y' = f(t, y) from t0 towards t1 (either direction).
///
/// `on_step(const DenseStep&, T t, State& y)` runs after each accepted step and
/// may modify y in place (e.g. a projection) and return StepAction::Stop.
/// If y is modified the next step re-evaluates f there. Right-hand sides may
/// throw blowup::Error to reject a step (treated as a failed error test).
template <typename T, std::size_t N, typename Rhs, typename OnStep>
Result<T, N> integrate(Rhs&& f, T t0, T t1, State<T, N> y0, const Control<T>& c,
                       OnStep&& on_step) {
  using std::abs;
  using std::max;
  using std::min;
  using std::pow;
  using K = detail::Tableau<T>;

  Result<T, N> res;
  res.t = t0;
  res.y = y0;
  if (t1 == t0) return res;
  const T dir = t1 > t0 ? T(1) : T(-1);
  const T eps = std::numeric_limits<T>::epsilon();

  State<T, N> k1 = f(t0, y0);
  T h = detail::initial_step(f, t0, y0, k1, dir, c);
  T facold = T(1e-4);
  const T beta = T(0.04);
  const T expo1 = T(0.2) - beta * T(0.75);
  bool last_rejected = false;

  T t = t0;
  State<T, N> y = y0;
  State<T, N> k2, k3, k4, k5, k6, k7, ys, y1, err;
  for (;;) {
    if (res.accepted + res.rejected >= c.max_steps) {
      res.status = Status::MaxSteps;
      break;
    }
    if (h < T(10) * eps * max(T(1), abs(t))) {
      res.status = Status::StepUnderflow;
      break;
    }
    bool final_step = false;
    if (dir * (t + dir * h - t1) >= T(0)) {
      h = abs(t1 - t);
      final_step = true;
    }
    const T hs = dir * h;

    T err_norm;
    try {
      for (std::size_t i = 0; i < N; ++i) ys[i] = y[i] + hs * K::a21 * k1[i];
      k2 = f(t + K::c2 * hs, ys);
      for (std::size_t i = 0; i < N; ++i) ys[i] = y[i] + hs * (K::a31 * k1[i] + K::a32 * k2[i]);
      k3 = f(t + K::c3 * hs, ys);
      for (std::size_t i = 0; i < N; ++i)
        ys[i] = y[i] + hs * (K::a41 * k1[i] + K::a42 * k2[i] + K::a43 * k3[i]);
      k4 = f(t + K::c4 * hs, ys);
      for (std::size_t i = 0; i < N; ++i)
        ys[i] = y[i] + hs * (K::a51 * k1[i] + K::a52 * k2[i] + K::a53 * k3[i] + K::a54 * k4[i]);
      k5 = f(t + K::c5 * hs, ys);
      for (std::size_t i = 0; i < N; ++i)
        ys[i] = y[i] + hs * (K::a61 * k1[i] + K::a62 * k2[i] + K::a63 * k3[i] + K::a64 * k4[i] +
                             K::a65 * k5[i]);
      k6 = f(t + hs, ys);
      for (std::size_t i = 0; i < N; ++i)
        y1[i] = y[i] + hs * (K::a71 * k1[i] + K::a73 * k3[i] + K::a74 * k4[i] + K::a75 * k5[i] +
                             K::a76 * k6[i]);
      k7 = f(t + hs, y1);
      for (std::size_t i = 0; i < N; ++i)
        err[i] = hs * (K::e1 * k1[i] + K::e3 * k3[i] + K::e4 * k4[i] + K::e5 * k5[i] +
                       K::e6 * k6[i] + K::e7 * k7[i]);
      err_norm = detail::error_norm(err, y, y1, c);
    } catch (const Error&) {
      ++res.rejected;
      h *= T(0.25);
      last_rejected = true;
      continue;
    }

    using std::isfinite;
    if (!isfinite(err_norm)) {
      ++res.rejected;
      h *= T(0.25);
      last_rejected = true;
      continue;
    }

    const T fac11 = pow(max(err_norm, T(1e-30)), expo1);
    if (err_norm <= T(1)) {
      DenseStep<T, N> dense;
      dense.t0 = t;
      dense.h = hs;
      for (std::size_t i = 0; i < N; ++i) {
        const T dy = y1[i] - y[i];
        const T bspl = hs * k1[i] - dy;
        dense.rcont[0][i] = y[i];
        dense.rcont[1][i] = dy;
        dense.rcont[2][i] = bspl;
        dense.rcont[3][i] = dy - hs * k7[i] - bspl;
        dense.rcont[4][i] = hs * (K::d1 * k1[i] + K::d3 * k3[i] + K::d4 * k4[i] + K::d5 * k5[i] +
                                  K::d6 * k6[i] + K::d7 * k7[i]);
      }
      facold = max(err_norm, T(1e-4));
      t = final_step ? t1 : t + hs;
      y = y1;
      k1 = k7;
      ++res.accepted;
      const State<T, N> before = y;
      const StepAction action = on_step(std::as_const(dense), t, y);
      if (y != before) k1 = f(t, y);
      res.t = t;
      res.y = y;
      if (action == StepAction::Stop) {
        res.status = Status::Stopped;
        break;
      }
      if (final_step) {
        res.status = Status::Completed;
        break;
      }
      T fac = fac11 / pow(facold, beta) / c.safety;
      fac = max(T(0.1), min(T(5), fac));
      T hnew = h / fac;
      if (last_rejected) hnew = min(hnew, h);
      h = min(hnew, c.h_max);
      last_rejected = false;
    } else {
      ++res.rejected;
      h = h / min(T(5), fac11 / c.safety);
      last_rejected = true;
    }
  }
  return res;
}

template <typename T, std::size_t N, typename Rhs>
Result<T, N> integrate(Rhs&& f, T t0, T t1, State<T, N> y0, const Control<T>& c) {
  return integrate<T, N>(std::forward<Rhs>(f), t0, t1, y0, c,
                         [](const DenseStep<T, N>&, const T&, State<T, N>&) { return StepAction::Continue; });
}

}  // namespace blowup::ode
