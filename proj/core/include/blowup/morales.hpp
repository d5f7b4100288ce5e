#pragma once

#include <optional>
#include <vector>

#include "blowup/critical_points.hpp"
#include "blowup/potential.hpp"

namespace blowup {

struct YoshidaCoefficient {
  double theta_c = 0.0;
  double lambda = 0.0;  // V''/(beta V) + 1
  double trivial = 0.0;  // beta - 1, the radial coefficient
  double beta = 0.0;
  std::optional<double> darboux_scale;
};

/// Nontrivial Yoshida coefficient at a critical point of V.
YoshidaCoefficient yoshida_lambda(const Potential& pot, double theta_c);

/// Scale s with grad U(s e) = s e on the ray e = (cos theta_c, sin theta_c),
/// i.e. s^{beta-2} = 1/(beta V). Absent when beta V <= 0.
std::optional<double> darboux_from_critical(const Potential& pot, double theta_c);

struct NecessaryCheck {
  bool satisfied = false;
  double margin = 0.0;  // (lambda - 1) beta + (beta + 2)^2 / 8
  bool boundary = false;
};

/// Necessary condition for integrability: -(beta+2)^2/8 <= (lambda - 1) beta.
/// The boundary counts as satisfied.
NecessaryCheck check_integrability_necessary(double lambda, double beta,
                                             double boundary_tol = 1e-12);

/// Largest lambda allowed by the necessary condition (for beta < 0) or the
/// smallest (beta > 0): 1 - (beta+2)^2 / (8 beta).
double necessary_boundary(double beta);

/// lambda in {-p(p-3)/2 : p integer}, the allowed set for beta = -1.
bool mr_beta_minus1_member(double lambda, double tol = 1e-9);

/// Yoshida coefficients at the Darboux point recovered from a central-difference
/// Hessian of U: {radial, tangential}. In the homogeneous normalization the
/// tangential eigenvalue equals lambda and the radial one beta - 1.
struct HessianCoefficients {
  double radial = 0.0;
  double tangential = 0.0;
};
HessianCoefficients hessian_coefficients(const Potential& pot, double theta_c, double scale);

struct MrComparison {
  YoshidaCoefficient coefficient;
  NecessaryCheck necessary;
  std::optional<bool> mr_member;  // only for beta = -1
};

/// One entry per critical point with V(theta_c) != 0.
std::vector<MrComparison> compare_morales(const Potential& pot,
                                          const CriticalPointOptions& opts = {});

}  // namespace blowup
