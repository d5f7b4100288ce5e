#pragma once

#include <string_view>
#include <vector>

#include "blowup/potential.hpp"

namespace blowup {

enum class Classification { Max, Min, Degenerate };

std::string_view to_string(Classification c) noexcept;

struct CriticalPoint {
  double theta = 0.0;  // in-domain; periodic domains report [0, 2pi)
  double V = 0.0;
  double V1 = 0.0;  // residual V'(theta) after refinement
  double V2 = 0.0;
  Classification classification = Classification::Degenerate;
};

struct CriticalPointOptions {
  int grid_n = 4096;
  double root_tol = 1e-12;
  double class_tol = 1e-9;
  /// Grid shrink next to open-domain endpoints, where V may have poles.
  double guard_band = 1e-6;
  /// max|V'| on the grid below degeneracy_tol * max(1, max|V|) means V is constant.
  double degeneracy_tol = 1e-10;
};

/// Zeros of V' on the domain, sorted by theta. Sign changes on a uniform grid
/// are bracketed and bisected; tangential (even-order) zeros are not found.
std::vector<CriticalPoint> find_critical_points(const Potential& pot,
                                                const CriticalPointOptions& opts = {});

Classification classify(double theta, const Potential& pot, double class_tol = 1e-9);

}  // namespace blowup
