#include <cmath>
#include <set>
#include <string>

#include <gtest/gtest.h>

#include "blowup/error.hpp"
#include "blowup/expression.hpp"
#include "blowup/potential.hpp"

namespace blowup {
namespace {

double value_at(const std::string& text, double theta, std::map<std::string, double> params = {}) {
  return compile(PotentialSpec::from_expression(text, 1.0, std::move(params))).eval(theta).value;
}

TEST(Expression, Precedence) {
  for (double th : {0.0, 1.0, 4.0}) EXPECT_DOUBLE_EQ(value_at("2+3*4^2", th), 50.0);
  EXPECT_DOUBLE_EQ(value_at("2^3^2", 0), 512.0);  // right associative
  EXPECT_DOUBLE_EQ(value_at("-2^2", 0), -4.0);
  EXPECT_DOUBLE_EQ(value_at("8/4/2", 0), 1.0);
  EXPECT_DOUBLE_EQ(value_at("1-2-3", 0), -4.0);
}

TEST(Expression, PowerOfCosine) {
  const ExprPtr e = parse_expression("cos(theta)^2");
  ASSERT_EQ(e->kind, ExpressionNode::Kind::Power);
  ASSERT_EQ(e->left->kind, ExpressionNode::Kind::Unary);
  EXPECT_EQ(e->left->unary_op, UnaryOp::Cos);
  EXPECT_EQ(e->left->left->kind, ExpressionNode::Kind::Theta);
  EXPECT_EQ(e->right->kind, ExpressionNode::Kind::Constant);
  EXPECT_EQ(e->right->constant, 2.0);
}

TEST(Expression, FreeParameters) {
  const ExprPtr e = parse_expression("-1/cos(theta) - 4*a^(3/2)/sqrt(a + 2*sin(theta)^2)");
  EXPECT_EQ(free_parameters(*e), (std::set<std::string>{"a"}));
  EXPECT_TRUE(depends_on_theta(*e));
  EXPECT_FALSE(depends_on_theta(*parse_expression("a*pi")));
}

TEST(Expression, PrintParseRoundTrip) {
  for (const char* text : {"-1/cos(theta) - 4*a^(3/2)/sqrt(a + 2*sin(theta)^2)",
                           "-(cos(theta)^4+sin(theta)^4)/4 - (e/2)*cos(theta)^2*sin(theta)^2",
                           "exp(-theta^2) * log(2 + sin(theta/3)) - abs(sin(theta))", "-2^-1"}) {
    const std::string printed = to_string(*parse_expression(text));
    for (double th : {-0.9, 0.2, 1.1}) {
      const std::map<std::string, double> p{{"a", 1.3}, {"e", 0.7}};
      EXPECT_NEAR(value_at(printed, th, p), value_at(text, th, p), 1e-14) << printed;
    }
  }
}

TEST(Expression, PiAndNumbers) {
  EXPECT_DOUBLE_EQ(value_at("pi", 0), M_PI);
  EXPECT_DOUBLE_EQ(value_at("1.5e2 + .5", 0), 150.5);
}

TEST(Expression, SyntaxErrorsCarryOffsets) {
  try {
    parse_expression("1 + * 2");
    FAIL();
  } catch (const SyntaxError& e) {
    EXPECT_EQ(e.offset(), 4u);
  }
  EXPECT_THROW(parse_expression("(1 + 2"), SyntaxError);
  EXPECT_THROW(parse_expression(""), SyntaxError);
  EXPECT_THROW(parse_expression("1 2"), SyntaxError);
  EXPECT_THROW(parse_expression("sin()"), SyntaxError);
}

TEST(Expression, UnknownFunction) {
  try {
    parse_expression("foo(theta)");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnknownFunction);
  }
}

TEST(Expression, ThetaDependentExponentIsUnsupported) {
  try {
    compile(PotentialSpec::from_expression("2^theta", 1.0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnsupportedExpression);
  }
}

TEST(Expression, Identifiers) {
  EXPECT_TRUE(is_valid_identifier("alpha_2"));
  EXPECT_FALSE(is_valid_identifier("2alpha"));
  EXPECT_FALSE(is_valid_identifier(""));
}

}  // namespace
}  // namespace blowup
