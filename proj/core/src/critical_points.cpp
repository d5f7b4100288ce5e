#include "blowup/critical_points.hpp"

#include <algorithm>
#include <cmath>

namespace blowup {

std::string_view to_string(Classification c) noexcept {
  switch (c) {
    case Classification::Max: return "max";
    case Classification::Min: return "min";
    case Classification::Degenerate: return "degenerate";
  }
  return "?";
}

Classification classify(double theta, const Potential& pot, double class_tol) {
  const double v2 = eval_V(pot, theta).d2;
  if (v2 < -class_tol) return Classification::Max;
  if (v2 > class_tol) return Classification::Min;
  return Classification::Degenerate;
}

namespace {

int sign_of(double x) { return (x > 0) - (x < 0); }

// Shrinks [lo, hi] (with d1 of opposite signs at the ends) below root_tol.
double bisect(const Potential& pot, double lo, double hi, double f_lo, double root_tol) {
  int s_lo = sign_of(f_lo);
  while (hi - lo > root_tol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double f_mid = eval_V(pot, mid).d1;
    const int s_mid = sign_of(f_mid);
    if (s_mid == 0) return mid;
    if (s_mid == s_lo) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double a = std::abs(eval_V(pot, lo).d1);
  const double b = std::abs(eval_V(pot, hi).d1);
  const double mid = 0.5 * (lo + hi);
  const double c = std::abs(eval_V(pot, mid).d1);
  if (c <= a && c <= b) return mid;
  return a <= b ? lo : hi;
}

}  // namespace

std::vector<CriticalPoint> find_critical_points(const Potential& pot,
                                                const CriticalPointOptions& opts) {
  if (opts.grid_n < 16) {
    throw Error(ErrorCode::InvalidArgument, "grid_n must be at least 16");
  }
  const Domain& dom = pot.domain();
  const int n = opts.grid_n;
  const double period = 2.0 * M_PI;

  // Grid abscissae: periodic domains sample [0, 2pi) and close the loop with
  // a wrap bracket; open domains sample [lo + guard, hi - guard] inclusive.
  std::vector<double> xs(static_cast<std::size_t>(n));
  if (dom.periodic) {
    for (int k = 0; k < n; ++k) xs[k] = period * k / n;
  } else {
    const double a = dom.lo + opts.guard_band;
    const double b = dom.hi - opts.guard_band;
    if (!(b > a)) {
      throw Error(ErrorCode::InvalidArgument, "domain shorter than the guard band");
    }
    for (int k = 0; k < n; ++k) xs[k] = a + (b - a) * k / (n - 1);
  }

  std::vector<double> d1(xs.size());
  double max_d1 = 0.0;
  double max_v = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    Jet2<double> j;
    try {
      j = eval_V(pot, xs[k]);
    } catch (const Error& e) {
      throw Error(ErrorCode::PoleEncountered,
                  "V cannot be evaluated at theta = " + std::to_string(xs[k]) + " (" + e.what() +
                      ")");
    }
    d1[k] = j.d1;
    max_d1 = std::max(max_d1, std::abs(j.d1));
    max_v = std::max(max_v, std::abs(j.value));
  }
  if (max_d1 < opts.degeneracy_tol * std::max(1.0, max_v)) {
    throw Error(ErrorCode::DegeneratePotential, "V' vanishes on the whole grid (V is constant)");
  }

  std::vector<double> roots;
  const std::size_t brackets = dom.periodic ? xs.size() : xs.size() - 1;
  for (std::size_t k = 0; k < brackets; ++k) {
    const std::size_t k1 = (k + 1) % xs.size();
    const double x0 = xs[k];
    const double x1 = (k1 == 0) ? period : xs[k1];
    const double f0 = d1[k];
    const double f1 = d1[k1];
    if (f0 == 0.0) {
      roots.push_back(x0);
      continue;
    }
    if (f1 == 0.0 || sign_of(f0) == sign_of(f1)) continue;
    roots.push_back(bisect(pot, x0, x1, f0, opts.root_tol));
  }

  if (dom.periodic) {
    for (double& r : roots) {
      r -= period * std::floor(r / period);
      if (r >= period) r = 0.0;
    }
  }
  std::sort(roots.begin(), roots.end());

  const double dedup = 10.0 * opts.root_tol;
  std::vector<double> unique;
  for (double r : roots) {
    if (unique.empty() || r - unique.back() > dedup) unique.push_back(r);
  }
  if (dom.periodic && unique.size() > 1 && unique.front() + period - unique.back() <= dedup) {
    unique.pop_back();
  }

  std::vector<CriticalPoint> out;
  out.reserve(unique.size());
  for (double r : unique) {
    const Jet2<double> j = eval_V(pot, r);
    CriticalPoint cp;
    cp.theta = r;
    cp.V = j.value;
    cp.V1 = j.d1;
    cp.V2 = j.d2;
    cp.classification = j.d2 < -opts.class_tol  ? Classification::Max
                        : j.d2 > opts.class_tol ? Classification::Min
                                                : Classification::Degenerate;
    out.push_back(cp);
  }
  return out;
}

}  // namespace blowup
