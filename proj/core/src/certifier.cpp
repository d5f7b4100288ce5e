#include "blowup/certifier.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <sstream>
#include <thread>

namespace blowup {

std::string_view to_string(Conclusion c) noexcept {
  return c == Conclusion::NonIntegrable ? "NonIntegrable" : "Inconclusive";
}

std::string_view to_string(CertificateKind k) noexcept {
  return k == CertificateKind::Direct ? "direct" : "complexified";
}

int Certificate::satisfied_count() const {
  return static_cast<int>(
      std::count_if(reports.begin(), reports.end(), [](const auto& r) { return r.satisfied; }));
}

std::string Certificate::statement() const {
  if (conclusion == Conclusion::NonIntegrable) {
    return kind == CertificateKind::Direct
               ? "no real-meromorphic first integral independent from H"
               : "no meromorphic first integral independent from H";
  }
  std::vector<int> failed;
  for (const auto& r : reports) {
    if (!r.satisfied) failed.push_back(r.index);
  }
  std::ostringstream os;
  os << "inconclusive: assumption" << (failed.size() == 1 ? "" : "s");
  for (std::size_t i = 0; i < failed.size(); ++i) os << (i ? ", " : " ") << failed[i];
  os << " not satisfied";
  return os.str();
}

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(12);
  os << x;
  return os.str();
}

AssumptionReport make_report(int index, double margin, double tol, std::string detail) {
  AssumptionReport r;
  r.index = index;
  r.margin = margin;
  r.satisfied = margin > tol;
  r.boundary = std::isfinite(margin) && std::abs(margin) <= tol;
  r.detail = std::move(detail);
  if (r.boundary) r.detail += " (boundary: within tolerance, not certified)";
  return r;
}

// Max of V on a closed grid; NaN if V cannot be evaluated somewhere.
double grid_max_V(const Potential& pot, double a, double b, int n, double& argmax) {
  double best = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < n; ++k) {
    const double x = (k == n - 1) ? b : a + (b - a) * k / (n - 1);
    double v;
    try {
      v = eval_V(pot, x).value;
    } catch (const Error&) {
      argmax = x;
      return kNaN;
    }
    if (v > best) {
      best = v;
      argmax = x;
    }
  }
  return best;
}

// min |V'| over the open interval (a, b) sampled at n - 1 interior points;
// negated when V' changes sign there.
double open_interval_monotonicity(const Potential& pot, double a, double b, int n) {
  double min_abs = std::numeric_limits<double>::infinity();
  int sign = 0;
  bool flipped = false;
  for (int k = 1; k < n; ++k) {
    const double x = a + (b - a) * k / n;
    double d;
    try {
      d = eval_V(pot, x).d1;
    } catch (const Error&) {
      return kNaN;
    }
    const int s = (d > 0) - (d < 0);
    if (sign == 0) {
      sign = s;
    } else if (s != 0 && s != sign) {
      flipped = true;
    }
    min_abs = std::min(min_abs, std::abs(d));
  }
  return flipped ? -min_abs : min_abs;
}

}  // namespace

Certificate check_triple(const Potential& pot, const Triple& triple, const CertifyOptions& opts) {
  const auto [tm, t0, tp] = triple;
  const double beta = pot.beta();
  if (!(tm < t0 && t0 < tp) || tp > tm + 2.0 * M_PI + 1e-12) {
    throw Error(ErrorCode::DomainViolation,
                "triple must satisfy theta_-1 < theta_0 < theta_1 <= theta_-1 + 2pi");
  }
  const Domain& dom = pot.domain();
  if (!dom.periodic && !(dom.contains(tm) && dom.contains(tp))) {
    throw Error(ErrorCode::DomainViolation, "triple leaves the potential's domain");
  }

  const Jet2<double> jm = eval_V(pot, tm);
  const Jet2<double> j0 = eval_V(pot, t0);
  const Jet2<double> jp = eval_V(pot, tp);
  for (const auto& [theta, j] : {std::pair{tm, jm}, std::pair{t0, j0}, std::pair{tp, jp}}) {
    if (!(std::abs(j.d1) <= opts.critical_tol)) {
      throw Error(ErrorCode::NotCriticalPoint,
                  "|V'(" + fmt(theta) + ")| = " + fmt(std::abs(j.d1)));
    }
  }

  Certificate cert;
  cert.triple = triple;
  cert.beta = beta;
  cert.potential = pot.spec();
  cert.expression = pot.expression_text();
  cert.kind = pot.negated() ? CertificateKind::Complexified : CertificateKind::Direct;
  cert.complex_analyticity_asserted = pot.negated();

  const double a1 = std::min(std::abs(beta + 2.0), std::abs(beta));
  cert.reports[0] = make_report(1, a1, opts.beta_tol, "beta = " + fmt(beta) + " (must avoid -2, 0)");

  const double gap = std::min(t0 - tm, tp - t0);
  std::string d2 = "critical points " + fmt(tm) + " < " + fmt(t0) + " < " + fmt(tp);
  if (std::abs(tp - (tm + 2.0 * M_PI)) <= 1e-9) d2 += " (theta_1 = theta_-1 + 2pi)";
  cert.reports[1] = make_report(2, gap, opts.strictness_tol, d2);

  double argmax = tm;
  const double vmax = grid_max_V(pot, tm, tp, opts.negativity_grid, argmax);
  cert.reports[2] = make_report(3, std::isnan(vmax) ? kNaN : -vmax, opts.strictness_tol,
                                std::isnan(vmax)
                                    ? "V not evaluable at theta = " + fmt(argmax)
                                    : "max V = " + fmt(vmax) + " at theta = " + fmt(argmax));

  const double left = open_interval_monotonicity(pot, tm, t0, opts.monotonicity_grid);
  const double right = open_interval_monotonicity(pot, t0, tp, opts.monotonicity_grid);
  const double a4 = std::min(left, right);
  cert.reports[3] = make_report(4, (std::isnan(left) || std::isnan(right)) ? kNaN : a4,
                                opts.strictness_tol,
                                "min |V'| between critical points = " + fmt(a4));

  const double a5 = std::min(-jm.d2, -jp.d2);
  cert.reports[4] = make_report(5, a5, opts.strictness_tol,
                                "V''(theta_-1) = " + fmt(jm.d2) + ", V''(theta_1) = " + fmt(jp.d2));

  const double a6 = j0.d2 + 0.125 * (beta + 2.0) * (beta + 2.0) * j0.value;
  cert.reports[5] =
      make_report(6, a6, opts.strictness_tol,
                  "V''(theta_0) = " + fmt(j0.d2) + " vs -(beta+2)^2 V(theta_0)/8 = " +
                      fmt(-0.125 * (beta + 2.0) * (beta + 2.0) * j0.value));

  cert.conclusion = cert.satisfied_count() == 6 ? Conclusion::NonIntegrable
                                                : Conclusion::Inconclusive;
  return cert;
}

std::vector<Triple> candidate_triples(const Potential& pot,
                                      const std::vector<CriticalPoint>& points) {
  std::vector<Triple> out;
  const std::size_t n = points.size();
  if (pot.domain().periodic) {
    if (n < 2) return out;
    const double period = 2.0 * M_PI;
    for (std::size_t i = 0; i < n; ++i) {
      // Unwrapped indices i, i+1, i+2 around the circle.
      auto at = [&](std::size_t k) {
        return points[k % n].theta + period * static_cast<double>(k / n);
      };
      out.push_back({at(i), at(i + 1), at(i + 2)});
    }
  } else {
    for (std::size_t i = 0; i + 2 < n; ++i) {
      out.push_back({points[i].theta, points[i + 1].theta, points[i + 2].theta});
    }
  }
  return out;
}

namespace {

Certificate no_triple_certificate(const Potential& pot, std::size_t found) {
  Certificate cert;
  cert.beta = pot.beta();
  cert.potential = pot.spec();
  cert.expression = pot.expression_text();
  cert.kind = pot.negated() ? CertificateKind::Complexified : CertificateKind::Direct;
  cert.complex_analyticity_asserted = pot.negated();
  const double beta = pot.beta();
  const double a1 = std::min(std::abs(beta + 2.0), std::abs(beta));
  cert.reports[0] = make_report(1, a1, 1e-12, "beta = " + fmt(beta) + " (must avoid -2, 0)");
  cert.reports[1] = make_report(2, kNaN, 0.0,
                                "only " + std::to_string(found) + " critical point(s) found");
  for (int i = 2; i < 6; ++i) {
    cert.reports[i] = make_report(i + 1, kNaN, 0.0, "no critical-point triple to check");
  }
  return cert;
}

// Ordering used to pick the reported certificate among candidates.
bool better(const Certificate& a, const Certificate& b) {
  const bool an = a.conclusion == Conclusion::NonIntegrable;
  const bool bn = b.conclusion == Conclusion::NonIntegrable;
  if (an != bn) return an;
  if (!an) {
    int sa = 0, sb = 0;
    for (int i = 0; i < 5; ++i) {
      sa += a.reports[i].satisfied;
      sb += b.reports[i].satisfied;
    }
    if (sa != sb) return sa > sb;
  }
  const double ma = a.assumption6_margin();
  const double mb = b.assumption6_margin();
  if (std::isnan(mb)) return !std::isnan(ma);
  if (std::isnan(ma)) return false;
  return ma > mb;
}

Certificate best_over_triples(const Potential& pot, const std::vector<CriticalPoint>& points,
                              const CertifyOptions& opts) {
  const auto triples = candidate_triples(pot, points);
  if (triples.empty()) return no_triple_certificate(pot, points.size());
  std::optional<Certificate> best;
  for (const Triple& t : triples) {
    Certificate c = check_triple(pot, t, opts);
    if (!best || better(c, *best)) best = std::move(c);
  }
  return *best;
}

}  // namespace

Certificate certify(const Potential& pot, bool allow_sign_flip, const CertifyOptions& opts) {
  const auto points = find_critical_points(pot, opts.critical);
  Certificate direct = best_over_triples(pot, points, opts);
  if (direct.conclusion == Conclusion::NonIntegrable || !allow_sign_flip) return direct;

  const bool positive_somewhere =
      std::any_of(points.begin(), points.end(), [](const CriticalPoint& p) { return p.V > 0; });
  if (!positive_somewhere) return direct;

  const Potential flipped = pot.negate();
  std::vector<CriticalPoint> flipped_points = points;
  for (auto& p : flipped_points) {
    p.V = -p.V;
    p.V1 = -p.V1;
    p.V2 = -p.V2;
    p.classification = p.classification == Classification::Max   ? Classification::Min
                       : p.classification == Classification::Min ? Classification::Max
                                                                 : Classification::Degenerate;
  }
  Certificate complexified = best_over_triples(flipped, flipped_points, opts);
  if (complexified.conclusion == Conclusion::NonIntegrable) return complexified;
  return direct;
}

namespace {

SweepSample evaluate_sample(const PotentialSpec& family, const std::string& param, double value,
                            const SweepOptions& opts) {
  SweepSample s;
  s.value = value;
  try {
    PotentialSpec spec = family;
    spec.params[param] = value;
    const Certificate c = certify(compile(spec), opts.allow_sign_flip, opts.certify);
    s.conclusion = c.conclusion;
    s.kind = c.kind;
  } catch (const Error& e) {
    s.error = e.what();
  }
  return s;
}

}  // namespace

SweepResult sweep_threshold(const PotentialSpec& family, const std::string& param, double lo,
                            double hi, const SweepOptions& opts) {
  if (!(lo < hi)) throw Error(ErrorCode::InvalidArgument, "sweep range needs lo < hi");
  if (opts.grid_m < 2) throw Error(ErrorCode::InvalidArgument, "grid_m must be at least 2");
  if (!is_valid_identifier(param)) {
    throw Error(ErrorCode::InvalidArgument, "invalid sweep parameter '" + param + "'");
  }
  {
    std::string text = family.expr;
    for (const BuiltinInfo& b : builtins()) {
      if (b.name == family.builtin) text = b.expression;
    }
    if (!free_parameters(*parse_expression(text)).count(param)) {
      throw Error(ErrorCode::InvalidArgument, "'" + param + "' does not appear in the potential");
    }
  }
  // Both endpoints must compile; errors here are the caller's problem.
  for (double v : {lo, hi}) {
    PotentialSpec spec = family;
    spec.params[param] = v;
    (void)compile(spec);
  }

  SweepResult result;
  result.param = param;
  const int m = opts.grid_m;
  result.grid.resize(static_cast<std::size_t>(m));

  unsigned workers = opts.workers ? opts.workers : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, static_cast<unsigned>(m));
  auto value_at = [&](int k) { return k == m - 1 ? hi : lo + (hi - lo) * k / (m - 1); };
  {
    std::vector<std::future<void>> jobs;
    for (unsigned w = 0; w < workers; ++w) {
      jobs.push_back(std::async(std::launch::async, [&, w] {
        for (int k = static_cast<int>(w); k < m; k += static_cast<int>(workers)) {
          result.grid[k] = evaluate_sample(family, param, value_at(k), opts);
        }
      }));
    }
    for (auto& j : jobs) j.get();
  }

  std::vector<std::pair<std::size_t, std::future<Threshold>>> refinements;
  for (std::size_t k = 0; k + 1 < result.grid.size(); ++k) {
    const SweepSample& a = result.grid[k];
    const SweepSample& b = result.grid[k + 1];
    if (!a.conclusion || !b.conclusion || *a.conclusion == *b.conclusion) continue;
    refinements.emplace_back(k, std::async(std::launch::async, [&, a, b] {
      double x0 = a.value, x1 = b.value;
      const Conclusion c0 = *a.conclusion;
      while (x1 - x0 > opts.thresh_tol) {
        const double mid = 0.5 * (x0 + x1);
        if (mid <= x0 || mid >= x1) break;
        const SweepSample s = evaluate_sample(family, param, mid, opts);
        if (!s.conclusion) break;
        if (*s.conclusion == c0) {
          x0 = mid;
        } else {
          x1 = mid;
        }
      }
      return Threshold{0.5 * (x0 + x1), x0, x1};
    }));
  }
  for (auto& [k, fut] : refinements) result.thresholds.push_back(fut.get());
  return result;
}

}  // namespace blowup
