#include <cmath>

#include <gtest/gtest.h>

#include "blowup/error.hpp"
#include "blowup/morales.hpp"

namespace blowup {
namespace {

Potential yoshida_g(double eps) { return compile(PotentialSpec::from_builtin("yoshida_g", {{"epsilon", eps}})); }
Potential isosceles(double alpha) { return compile(PotentialSpec::from_builtin("isosceles", {{"alpha", alpha}})); }

TEST(Yoshida, IsoscelesAtZero) {
  const YoshidaCoefficient y = yoshida_lambda(isosceles(1), 0);
  EXPECT_NEAR(y.lambda, (-1.0) * (-1.0 / 5) * 7 + 1, 1e-12);
  EXPECT_NEAR(y.lambda, 2.4, 1e-12);
  EXPECT_EQ(y.trivial, -2);
  EXPECT_EQ(y.beta, -1);
  ASSERT_TRUE(y.darboux_scale);
  EXPECT_NEAR(*y.darboux_scale, std::cbrt(5.0), 1e-12);
}

// V(0) = -1/4 and V''(0) = 1 - epsilon with beta = 4 give lambda = epsilon.
TEST(Yoshida, YoshidaGAtZeroEqualsEpsilon) {
  for (double eps : {-0.5, 0.3, 2.0, 4.0, 7.5}) {
    EXPECT_NEAR(yoshida_lambda(yoshida_g(eps), 0).lambda, eps, 1e-12) << eps;
  }
}

TEST(Yoshida, FlatCriticalPointGivesOne) {
  const Potential p = compile(PotentialSpec::from_expression("cos(theta)^3 - 2", 1.0));
  EXPECT_NEAR(yoshida_lambda(p, M_PI / 2).lambda, 1.0, 1e-12);
}

TEST(Yoshida, Errors) {
  try {
    yoshida_lambda(compile(PotentialSpec::from_expression("cos(theta)^2 - 1", 3.0)), 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ZeroPotentialValue);
  }
  try {
    yoshida_lambda(compile(PotentialSpec::from_expression("cos(theta) - 2", 0.0)), 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ZeroBeta);
  }
}

TEST(Darboux, Scales) {
  EXPECT_NEAR(*darboux_from_critical(isosceles(1), 0), std::cbrt(5.0), 1e-12);
  EXPECT_FALSE(darboux_from_critical(yoshida_g(4), 0));
  EXPECT_NEAR(*darboux_from_critical(compile(PotentialSpec::from_expression("cos(theta)^2", 1.0)), 0), 1.0,
              1e-15);
  try {
    darboux_from_critical(compile(PotentialSpec::from_expression("cos(theta)^2 + 1", 2.0)), 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::BetaTwoScaleDegenerate);
  }
}

// At the Darboux point the Hessian of U has the radial eigenvalue beta - 1
// and the tangential eigenvalue lambda.
TEST(Darboux, HessianCrossCheck) {
  const HessianCoefficients h = hessian_coefficients(isosceles(1), 0, std::cbrt(5.0));
  EXPECT_NEAR(h.tangential, 2.4, 1e-6);
  EXPECT_NEAR(h.radial, -2.0, 1e-6);
  const Potential p = isosceles(3);
  for (const double th : {0.0, std::acos(std::sqrt(5.0 / 14))}) {
    const auto s = darboux_from_critical(p, th);
    if (!s) continue;
    EXPECT_NEAR(hessian_coefficients(p, th, *s).tangential, yoshida_lambda(p, th).lambda, 1e-6);
  }
}

TEST(Necessary, Inequality) {
  const NecessaryCheck b = check_integrability_necessary(9.0 / 8, -1);
  EXPECT_TRUE(b.satisfied);
  EXPECT_TRUE(b.boundary);
  EXPECT_NEAR(b.margin, 0, 1e-15);

  const NecessaryCheck f = check_integrability_necessary(2.4, -1);
  EXPECT_FALSE(f.satisfied);
  EXPECT_NEAR(f.margin, -1.275, 1e-12);

  for (double beta : {-5.0, -1.0, 1.0, 3.0, 7.0}) {
    const NecessaryCheck one = check_integrability_necessary(1, beta);
    EXPECT_TRUE(one.satisfied);
    EXPECT_NEAR(one.margin, (beta + 2) * (beta + 2) / 8, 1e-12);
  }
  EXPECT_NEAR(necessary_boundary(-1), 9.0 / 8, 1e-15);
}

TEST(Necessary, MoralesRamisMembers) {
  for (double lam : {1.0, 0.0, -2.0, -5.0, -9.0, -14.0}) EXPECT_TRUE(mr_beta_minus1_member(lam)) << lam;
  EXPECT_FALSE(mr_beta_minus1_member(0.5));
  EXPECT_FALSE(mr_beta_minus1_member(2.4));
  EXPECT_FALSE(mr_beta_minus1_member(-1.0));
}

TEST(Compare, IsoscelesReport) {
  const auto rows = compare_morales(isosceles(1));
  ASSERT_EQ(rows.size(), 3u);
  const MrComparison& mid = rows[1];
  EXPECT_NEAR(mid.coefficient.lambda, 2.4, 1e-10);
  EXPECT_FALSE(mid.necessary.satisfied);
  ASSERT_TRUE(mid.mr_member);
  EXPECT_FALSE(*mid.mr_member);
  EXPECT_FALSE(compare_morales(yoshida_g(4))[0].mr_member);
}

}  // namespace
}  // namespace blowup
