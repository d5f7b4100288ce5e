#include <cmath>

#include <gtest/gtest.h>

#include "blowup/ode.hpp"
#include "blowup/scalar.hpp"

namespace blowup::ode {
namespace {

template <typename T>
State<T, 2> oscillator(const T&, const State<T, 2>& y) {
  return {y[1], -y[0]};
}

TEST(DormandPrince, HarmonicOscillatorDouble) {
  Control<double> c;
  const auto res = integrate<double, 2>(oscillator<double>, 0.0, 10.0, {1.0, 0.0}, c);
  ASSERT_EQ(res.status, Status::Completed);
  EXPECT_EQ(res.t, 10.0);
  EXPECT_NEAR(res.y[0], std::cos(10.0), 1e-9);
  EXPECT_NEAR(res.y[1], -std::sin(10.0), 1e-9);
  EXPECT_GT(res.accepted, 10);
}

TEST(DormandPrince, HarmonicOscillatorQuad) {
  Control<quad> c;
  c.rtol = quad(1e-20);
  c.atol = quad(1e-22);
  const auto res = integrate<quad, 2>(oscillator<quad>, quad(0), quad(2), {quad(1), quad(0)}, c);
  ASSERT_EQ(res.status, Status::Completed);
  EXPECT_LT(abs(res.y[0] - cos(quad(2))), quad(1e-18));
}

TEST(DormandPrince, Backward) {
  const auto res = integrate<double, 2>(oscillator<double>, 0.0, -3.0, {1.0, 0.0}, Control<double>{});
  ASSERT_EQ(res.status, Status::Completed);
  EXPECT_NEAR(res.y[0], std::cos(3.0), 1e-9);
  EXPECT_NEAR(res.y[1], std::sin(3.0), 1e-9);
}

TEST(DormandPrince, DenseOutputIsAccurateInsideSteps) {
  Control<double> c;
  c.h_max = 0.5;
  double worst = 0;
  auto on_step = [&](const DenseStep<double, 2>& d, double, State<double, 2>&) {
    for (double f : {0.25, 0.5, 0.75}) {
      const double t = d.t0 + f * d.h;
      worst = std::max(worst, std::abs(d(t)[0] - std::cos(t)));
    }
    return StepAction::Continue;
  };
  integrate<double, 2>(oscillator<double>, 0.0, 5.0, {1.0, 0.0}, c, on_step);
  EXPECT_LT(worst, 1e-8);
}

TEST(DormandPrince, StopFromCallback) {
  auto on_step = [](const DenseStep<double, 2>&, double t, State<double, 2>&) {
    return t > 1 ? StepAction::Stop : StepAction::Continue;
  };
  const auto res = integrate<double, 2>(oscillator<double>, 0.0, 10.0, {1.0, 0.0}, Control<double>{}, on_step);
  EXPECT_EQ(res.status, Status::Stopped);
  EXPECT_GT(res.t, 1.0);
  EXPECT_LT(res.t, 10.0);
}

// y' = y^2 from y(0) = 1 blows up at t = 1.
TEST(DormandPrince, FiniteTimeBlowupUnderflows) {
  auto f = [](double, const State<double, 1>& y) { return State<double, 1>{y[0] * y[0]}; };
  const auto res = integrate<double, 1>(f, 0.0, 2.0, {1.0}, Control<double>{});
  EXPECT_EQ(res.status, Status::StepUnderflow);
  EXPECT_NEAR(res.t, 1.0, 1e-3);
}

TEST(DormandPrince, ExactForLowDegreePolynomials) {
  auto f = [](double t, const State<double, 1>&) { return State<double, 1>{4 * t * t * t}; };
  const auto res = integrate<double, 1>(f, 0.0, 2.0, {0.0}, Control<double>{});
  EXPECT_NEAR(res.y[0], 16.0, 1e-12);
}

}  // namespace
}  // namespace blowup::ode
