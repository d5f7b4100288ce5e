#pragma once

// Expression trees for V(theta) and the recursive-descent parser behind them.
//
//   expr    := term (("+"|"-") term)*
//   term    := factor (("*"|"/") factor)*
//   factor  := "-" factor | primary ("^" factor)?
//   primary := number | "pi" | "theta" | ident | ident "(" expr ")" | "(" expr ")"

#include <memory>
#include <set>
#include <string>
#include <string_view>

#include "blowup/jet.hpp"

namespace blowup {

struct ExpressionNode;
using ExprPtr = std::shared_ptr<const ExpressionNode>;

struct ExpressionNode {
  enum class Kind { Constant, Parameter, Theta, Unary, Binary, Power };

  Kind kind = Kind::Constant;
  double constant = 0.0;  // Constant
  std::string name;       // Parameter
  UnaryOp unary_op = UnaryOp::Neg;
  BinaryOp binary_op = BinaryOp::Add;  // Add/Sub/Mul/Div only; powers use Kind::Power
  ExprPtr left;   // Unary child, Binary lhs, Power base
  ExprPtr right;  // Binary rhs, Power exponent (must not depend on theta)

  static ExprPtr make_constant(double c);
  static ExprPtr make_parameter(std::string name);
  static ExprPtr make_theta();
  static ExprPtr make_unary(UnaryOp op, ExprPtr child);
  static ExprPtr make_binary(BinaryOp op, ExprPtr lhs, ExprPtr rhs);
  static ExprPtr make_power(ExprPtr base, ExprPtr exponent);
};

ExprPtr parse_expression(std::string_view text);

/// Fully parenthesized text that parses back to an equivalent tree.
std::string to_string(const ExpressionNode& node);

std::set<std::string> free_parameters(const ExpressionNode& node);

bool depends_on_theta(const ExpressionNode& node);

bool is_valid_identifier(std::string_view name);

}  // namespace blowup
