#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "blowup/critical_points.hpp"
#include "blowup/potential.hpp"

namespace blowup {

enum class Conclusion { NonIntegrable, Inconclusive };
enum class CertificateKind { Direct, Complexified };

std::string_view to_string(Conclusion c) noexcept;
std::string_view to_string(CertificateKind k) noexcept;

struct AssumptionReport {
  int index = 0;  // 1..6
  bool satisfied = false;
  /// Positive means satisfied with that much slack. NaN when not evaluable.
  double margin = 0.0;
  /// |margin| <= strictness_tol: too close to call, reported unsatisfied.
  bool boundary = false;
  std::string detail;
};

using Triple = std::array<double, 3>;

struct Certificate {
  std::optional<Triple> triple;
  std::array<AssumptionReport, 6> reports{};
  Conclusion conclusion = Conclusion::Inconclusive;
  CertificateKind kind = CertificateKind::Direct;
  double beta = 0.0;
  PotentialSpec potential;
  std::string expression;  // bound V(theta) actually checked (after any sign flip)
  /// Complexified verdicts rely on V extending analytically to C^2 \ {0};
  /// that cannot be checked numerically and is recorded as asserted.
  bool complex_analyticity_asserted = false;

  double assumption6_margin() const { return reports[5].margin; }
  int satisfied_count() const;
  /// Human-readable conclusion; complexified certificates make the weaker claim.
  std::string statement() const;
};

struct CertifyOptions {
  CriticalPointOptions critical;
  double strictness_tol = 1e-9;
  double beta_tol = 1e-12;
  /// |V'| allowed at a triple angle before it is rejected as non-critical.
  double critical_tol = 1e-8;
  int negativity_grid = 1024;
  int monotonicity_grid = 256;
};

/// Checks the six assumptions on one consecutive triple of critical points.
Certificate check_triple(const Potential& pot, const Triple& triple,
                         const CertifyOptions& opts = {});

/// Consecutive triples of the sorted critical points; on a circle this
/// includes the wrap triples, and with exactly two points the pair closes
/// on itself (theta_{-1}, theta_0, theta_{-1} + 2pi).
std::vector<Triple> candidate_triples(const Potential& pot,
                                      const std::vector<CriticalPoint>& points);

/// Best certificate over all candidate triples. With allow_sign_flip, -V is
/// also tried whenever V is positive at some critical point; those results are
/// marked Complexified.
Certificate certify(const Potential& pot, bool allow_sign_flip = false,
                    const CertifyOptions& opts = {});

struct SweepSample {
  double value = 0.0;
  std::optional<Conclusion> conclusion;  // empty when evaluation failed
  std::optional<CertificateKind> kind;
  std::string error;
};

struct Threshold {
  double value = 0.0;  // midpoint of the final bracket
  double lo = 0.0;
  double hi = 0.0;
  double width() const { return hi - lo; }
};

struct SweepResult {
  std::string param;
  std::vector<SweepSample> grid;
  std::vector<Threshold> thresholds;
};

struct SweepOptions {
  int grid_m = 200;
  double thresh_tol = 1e-9;
  bool allow_sign_flip = false;
  /// 0 picks std::thread::hardware_concurrency().
  unsigned workers = 0;
  CertifyOptions certify;
};

/// Samples certify() on a uniform grid of `param` over [lo, hi] and bisects
/// every adjacent pair with differing conclusions down to thresh_tol.
SweepResult sweep_threshold(const PotentialSpec& family, const std::string& param, double lo,
                            double hi, const SweepOptions& opts = {});

}  // namespace blowup
