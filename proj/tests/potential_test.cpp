#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "blowup/critical_points.hpp"
#include "blowup/error.hpp"
#include "blowup/potential.hpp"

namespace blowup {
namespace {

Potential yoshida_g(double eps) { return compile(PotentialSpec::from_builtin("yoshida_g", {{"epsilon", eps}})); }
Potential isosceles(double alpha) { return compile(PotentialSpec::from_builtin("isosceles", {{"alpha", alpha}})); }

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no exception";
  return ErrorCode::InvalidArgument;
}

TEST(Potential, BuiltinValues) {
  const Jet2<double> y = yoshida_g(4).eval(0.0);
  EXPECT_DOUBLE_EQ(y.value, -0.25);
  EXPECT_NEAR(y.d1, 0.0, 1e-15);
  EXPECT_NEAR(y.d2, -3.0, 1e-14);

  const Jet2<double> i = isosceles(1).eval(0.0);
  EXPECT_DOUBLE_EQ(i.value, -5.0);
  EXPECT_NEAR(i.d1, 0.0, 1e-15);
  EXPECT_NEAR(i.d2, 7.0, 1e-13);

  const Jet2<double> c = compile(PotentialSpec::from_expression("cos(theta)", 1.0)).eval(0.0);
  EXPECT_EQ(c.value, 1.0);
  EXPECT_EQ(c.d1, 0.0);
  EXPECT_EQ(c.d2, -1.0);
}

TEST(Potential, BuiltinBetasAndDomains) {
  EXPECT_EQ(isosceles(1).beta(), -1.0);
  EXPECT_FALSE(isosceles(1).domain().periodic);
  EXPECT_NEAR(isosceles(1).domain().lo, -M_PI / 2, 1e-15);
  EXPECT_EQ(yoshida_g(4).beta(), 4.0);
  EXPECT_TRUE(yoshida_g(4).domain().periodic);
}

TEST(Potential, UnboundParameter) {
  EXPECT_EQ(code_of([] { compile(PotentialSpec::from_builtin("isosceles")); }),
            ErrorCode::UnboundParameter);
  EXPECT_EQ(code_of([] { compile(PotentialSpec::from_builtin("nope")); }), ErrorCode::UnknownBuiltin);
}

TEST(Potential, OpenDomainRejectsOutsidePoints) {
  EXPECT_EQ(code_of([] { isosceles(1).eval(2.0); }), ErrorCode::DomainError);
}

TEST(Potential, PeriodicDomainWraps) {
  const Potential p = yoshida_g(2.5);
  EXPECT_NEAR(p.eval(0.3 + 2 * M_PI).value, p.eval(0.3).value, 1e-14);
  EXPECT_NEAR(p.eval(0.3 - 4 * M_PI).d2, p.eval(0.3).d2, 1e-13);
}

TEST(Potential, CartesianU) {
  EXPECT_DOUBLE_EQ(yoshida_g(4).eval_U({0, 1}), -0.25);
  EXPECT_DOUBLE_EQ(isosceles(1).eval_U({1, 0}), -5.0);
  EXPECT_EQ(code_of([] { yoshida_g(4).eval_U({0, 0}); }), ErrorCode::OriginSingularity);
}

TEST(Potential, Homogeneity) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> U(-1, 1);
  for (const Potential& p : {yoshida_g(4), isosceles(1)}) {
    for (int k = 0; k < 50; ++k) {
      const Vec2 q{0.5 + 0.5 * std::abs(U(rng)), 0.8 * U(rng)};
      const double lhs = p.eval_U({2 * q[0], 2 * q[1]});
      const double rhs = std::pow(2.0, p.beta()) * p.eval_U(q);
      EXPECT_NEAR(lhs, rhs, 1e-13 * std::abs(rhs));
    }
  }
}

TEST(Potential, GradientMatchesDifferencesOfU) {
  const Potential p = isosceles(1.3);
  const Vec2 q{0.9, 0.4};
  const Vec2 g = p.grad_U(q);
  const double h = 1e-6;
  EXPECT_NEAR(g[0], (p.eval_U({q[0] + h, q[1]}) - p.eval_U({q[0] - h, q[1]})) / (2 * h), 1e-7);
  EXPECT_NEAR(g[1], (p.eval_U({q[0], q[1] + h}) - p.eval_U({q[0], q[1] - h})) / (2 * h), 1e-7);
}

TEST(Potential, ExpressionSpecMatchesBuiltin) {
  PotentialSpec s = PotentialSpec::from_expression(
      "-(cos(theta)^4+sin(theta)^4)/4 - (e/2)*cos(theta)^2*sin(theta)^2", 4.0, {{"e", 4}});
  const Potential a = compile(s);
  const Potential b = yoshida_g(4);
  for (int k = 0; k < 1000; ++k) {
    const double th = 2 * M_PI * k / 1000;
    EXPECT_NEAR(a.eval(th).value, b.eval(th).value, 1e-12);
  }
}

TEST(Potential, Negate) {
  const Potential n = yoshida_g(4).negate();
  EXPECT_TRUE(n.negated());
  EXPECT_DOUBLE_EQ(n.eval(0.0).value, 0.25);
}

TEST(CriticalPoints, YoshidaEightPoints) {
  const auto pts = find_critical_points(yoshida_g(4));
  ASSERT_EQ(pts.size(), 8u);
  for (int k = 0; k < 8; ++k) {
    EXPECT_NEAR(pts[static_cast<std::size_t>(k)].theta, k * M_PI / 4, 1e-10);
    EXPECT_EQ(pts[static_cast<std::size_t>(k)].classification,
              k % 2 == 0 ? Classification::Max : Classification::Min);
  }
}

// For isosceles, V' = sin(theta) (8 alpha^{3/2} cos(theta) (alpha + 2 sin^2)^{-3/2} - 1/cos^2),
// so the nonzero critical points satisfy cos^2 = (alpha + 2) / (4 alpha + 2).
TEST(CriticalPoints, IsoscelesThreePoints) {
  for (double alpha : {1.0, 3.0, 13.0}) {
    const auto pts = find_critical_points(isosceles(alpha));
    ASSERT_EQ(pts.size(), 3u) << alpha;
    const double star = std::acos(std::sqrt((alpha + 2) / (4 * alpha + 2)));
    EXPECT_NEAR(pts[0].theta, -star, 1e-10);
    EXPECT_NEAR(pts[1].theta, 0.0, 1e-12);
    EXPECT_NEAR(pts[2].theta, star, 1e-10);
  }
  EXPECT_NEAR(find_critical_points(isosceles(1))[2].theta, M_PI / 4, 1e-10);
}

TEST(CriticalPoints, Classification) {
  EXPECT_EQ(classify(0.0, yoshida_g(4)), Classification::Max);
  EXPECT_EQ(classify(M_PI / 4, yoshida_g(4)), Classification::Min);
  EXPECT_EQ(classify(0.0, isosceles(1)), Classification::Min);
}

TEST(CriticalPoints, ConstantIsDegenerate) {
  EXPECT_EQ(code_of([] { find_critical_points(compile(PotentialSpec::from_expression("1", 1.0))); }),
            ErrorCode::DegeneratePotential);
  EXPECT_EQ(code_of([] { find_critical_points(yoshida_g(1)); }), ErrorCode::DegeneratePotential);
}

}  // namespace
}  // namespace blowup
