#include "blowup/morales.hpp"

#include <cmath>

#include "blowup/error.hpp"

namespace blowup {

YoshidaCoefficient yoshida_lambda(const Potential& pot, double theta_c) {
  const double beta = pot.beta();
  if (beta == 0.0) throw Error(ErrorCode::ZeroBeta, "Yoshida coefficient needs beta != 0");
  const Jet2<double> j = pot.eval(theta_c);
  if (j.value == 0.0) throw Error(ErrorCode::ZeroPotentialValue, "V(theta_c) = 0");
  YoshidaCoefficient y;
  y.theta_c = theta_c;
  y.beta = beta;
  y.lambda = j.d2 / (beta * j.value) + 1.0;
  y.trivial = beta - 1.0;
  if (beta != 2.0) y.darboux_scale = darboux_from_critical(pot, theta_c);
  return y;
}

std::optional<double> darboux_from_critical(const Potential& pot, double theta_c) {
  const double beta = pot.beta();
  if (beta == 2.0) {
    throw Error(ErrorCode::BetaTwoScaleDegenerate, "beta = 2: grad U(s e) = s e does not fix s");
  }
  const double bv = beta * pot.eval(theta_c).value;
  if (!(bv > 0.0)) return std::nullopt;
  return std::pow(bv, -1.0 / (beta - 2.0));
}

NecessaryCheck check_integrability_necessary(double lambda, double beta, double boundary_tol) {
  NecessaryCheck c;
  c.margin = (lambda - 1.0) * beta + (beta + 2.0) * (beta + 2.0) / 8.0;
  c.boundary = std::abs(c.margin) <= boundary_tol;
  c.satisfied = c.margin >= 0.0 || c.boundary;
  return c;
}

double necessary_boundary(double beta) {
  if (beta == 0.0) throw Error(ErrorCode::ZeroBeta, "the inequality needs beta != 0");
  return 1.0 - (beta + 2.0) * (beta + 2.0) / (8.0 * beta);
}

bool mr_beta_minus1_member(double lambda, double tol) {
  // lambda = -p(p-3)/2  <=>  p = (3 +- sqrt(9 - 8 lambda)) / 2
  auto value = [](double p) { return -p * (p - 3.0) / 2.0; };
  auto close = [&](double p) { return std::abs(lambda - value(p)) <= tol; };
  const double disc = 9.0 - 8.0 * lambda;
  if (disc < 0.0) {
    // Members never exceed 1; p = 1 and p = 2 attain it.
    return close(1.0) || close(2.0);
  }
  const double root = std::sqrt(disc);
  for (double p : {(3.0 + root) / 2.0, (3.0 - root) / 2.0}) {
    if (close(std::floor(p)) || close(std::ceil(p))) return true;
  }
  return false;
}

HessianCoefficients hessian_coefficients(const Potential& pot, double theta_c, double scale) {
  const double c = std::cos(theta_c);
  const double s = std::sin(theta_c);
  const Vec2 x{scale * c, scale * s};
  const double h = 1e-5 * scale;
  // Columns of the Hessian from central differences of the exact gradient.
  double H[2][2];
  for (int k = 0; k < 2; ++k) {
    Vec2 xp = x, xm = x;
    xp[k] += h;
    xm[k] -= h;
    const Vec2 gp = pot.grad_U(xp);
    const Vec2 gm = pot.grad_U(xm);
    H[0][k] = (gp[0] - gm[0]) / (2.0 * h);
    H[1][k] = (gp[1] - gm[1]) / (2.0 * h);
  }
  const double sym = 0.5 * (H[0][1] + H[1][0]);
  // Rayleigh quotients along the radial and tangential unit vectors; at a
  // Darboux point these are the eigen-directions.
  HessianCoefficients out;
  out.radial = c * c * H[0][0] + 2.0 * c * s * sym + s * s * H[1][1];
  out.tangential = s * s * H[0][0] - 2.0 * c * s * sym + c * c * H[1][1];
  return out;
}

std::vector<MrComparison> compare_morales(const Potential& pot, const CriticalPointOptions& opts) {
  std::vector<MrComparison> out;
  for (const CriticalPoint& cp : find_critical_points(pot, opts)) {
    if (cp.V == 0.0) continue;
    MrComparison m;
    m.coefficient = yoshida_lambda(pot, cp.theta);
    m.necessary = check_integrability_necessary(m.coefficient.lambda, pot.beta());
    if (pot.beta() == -1.0) m.mr_member = mr_beta_minus1_member(m.coefficient.lambda);
    out.push_back(m);
  }
  return out;
}

}  // namespace blowup
