#include <cmath>

#include <gtest/gtest.h>

#include "blowup/error.hpp"
#include "blowup/jet.hpp"
#include "blowup/scalar.hpp"

namespace blowup {
namespace {

using J = Jet2<double>;

void expect_jet(const J& j, double v, double d1, double d2, double tol = 1e-14) {
  EXPECT_NEAR(j.value, v, tol);
  EXPECT_NEAR(j.d1, d1, tol);
  EXPECT_NEAR(j.d2, d2, tol);
}

TEST(Jet, Lifts) {
  expect_jet(lift_variable(0.5), 0.5, 1, 0);
  expect_jet(lift_constant(3.0), 3, 0, 0);
  expect_jet(lift_variable(M_PI), M_PI, 1, 0);
}

TEST(Jet, Arithmetic) {
  expect_jet(J{2, 1, 0} * J{3, 1, 0}, 6, 5, 2);
  expect_jet(J{1, 0, 0} / J{2, 1, 0}, 0.5, -0.25, 0.25);
  expect_jet(J{1, 2, 3} + J{4, 5, 6}, 5, 7, 9);
  expect_jet(J{1, 2, 3} - J{4, 5, 6}, -3, -3, -3);
  expect_jet(-J{1, 2, 3}, -1, -2, -3);
}

// (u^c)'' = c(c-1) u^{c-2} u'^2 + c u^{c-1} u''. With (u, u', u'') = (4, 2, 2)
// and c = 3/2 that is 0.375 * 0.5 * 4 ... = 1.5 + 6 = 7.5.
TEST(Jet, PowConstantExponent) {
  const J j = pow(J{4, 2, 2}, 1.5);
  expect_jet(j, 8, 6, 7.5);
  // Same value through exp(c log u), an independent route through the chain rule.
  const J k = exp(log(J{4, 2, 2}) * lift_constant(1.5));
  expect_jet(j, k.value, k.d1, k.d2, 1e-12);
}

TEST(Jet, PowIntegerExponentAcceptsNegativeBase) {
  expect_jet(pow(J{-2, 1, 0}, 3.0), -8, 12, -12);
  expect_jet(pow(J{-2, 1, 0}, 0.0), 1, 0, 0);
}

TEST(Jet, PowDomainErrors) {
  EXPECT_THROW(pow(J{-1, 1, 0}, 0.5), Error);
  EXPECT_THROW(pow(J{0, 1, 0}, -2.0), Error);
}

TEST(Jet, Elementary) {
  expect_jet(sin(lift_variable(0.0)), 0, 1, 0);
  expect_jet(sqrt(J{4, 2, 2}), 2, 0.5, 0.375);
  expect_jet(cos(lift_variable(0.0)), 1, 0, -1);
  const double x = 0.3;
  expect_jet(tan(lift_variable(x)), std::tan(x), 1 / (std::cos(x) * std::cos(x)),
             2 * std::tan(x) / (std::cos(x) * std::cos(x)));
  expect_jet(exp(lift_variable(x)), std::exp(x), std::exp(x), std::exp(x));
  expect_jet(log(lift_variable(x)), std::log(x), 1 / x, -1 / (x * x));
  expect_jet(abs(J{-2, 3, 4}), 2, -3, -4);
}

TEST(Jet, DivisionByZero) {
  try {
    (void)(J{1, 0, 0} / J{0, 1, 0});
    FAIL() << "expected a throw";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DivisionByZero);
  }
}

TEST(Jet, LogAndSqrtDomain) {
  EXPECT_THROW(log(J{0, 1, 0}), Error);
  EXPECT_THROW(sqrt(J{-1, 1, 0}), Error);
}

TEST(Jet, QuadMatchesDouble) {
  const Jet2<quad> q = sin(lift_variable(quad(0.7))) * exp(lift_variable(quad(0.7)));
  const J d = sin(lift_variable(0.7)) * exp(lift_variable(0.7));
  EXPECT_NEAR(static_cast<double>(q.value), d.value, 1e-15);
  EXPECT_NEAR(static_cast<double>(q.d1), d.d1, 1e-15);
  EXPECT_NEAR(static_cast<double>(q.d2), d.d2, 1e-15);
}

}  // namespace
}  // namespace blowup
