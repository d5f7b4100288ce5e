#include "blowup/expression.hpp"

#include <cctype>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <utility>

namespace blowup {

ExprPtr ExpressionNode::make_constant(double c) {
  auto n = std::make_shared<ExpressionNode>();
  n->kind = Kind::Constant;
  n->constant = c;
  return n;
}

ExprPtr ExpressionNode::make_parameter(std::string name) {
  auto n = std::make_shared<ExpressionNode>();
  n->kind = Kind::Parameter;
  n->name = std::move(name);
  return n;
}

ExprPtr ExpressionNode::make_theta() {
  auto n = std::make_shared<ExpressionNode>();
  n->kind = Kind::Theta;
  return n;
}

ExprPtr ExpressionNode::make_unary(UnaryOp op, ExprPtr child) {
  auto n = std::make_shared<ExpressionNode>();
  n->kind = Kind::Unary;
  n->unary_op = op;
  n->left = std::move(child);
  return n;
}

ExprPtr ExpressionNode::make_binary(BinaryOp op, ExprPtr lhs, ExprPtr rhs) {
  if (op == BinaryOp::Pow) {
    return make_power(std::move(lhs), std::move(rhs));
  }
  auto n = std::make_shared<ExpressionNode>();
  n->kind = Kind::Binary;
  n->binary_op = op;
  n->left = std::move(lhs);
  n->right = std::move(rhs);
  return n;
}

ExprPtr ExpressionNode::make_power(ExprPtr base, ExprPtr exponent) {
  auto n = std::make_shared<ExpressionNode>();
  n->kind = Kind::Power;
  n->binary_op = BinaryOp::Pow;
  n->left = std::move(base);
  n->right = std::move(exponent);
  return n;
}

bool is_valid_identifier(std::string_view name) {
  if (name.empty()) return false;
  const auto head = static_cast<unsigned char>(name.front());
  if (!(std::isalpha(head) || head == '_')) return false;
  for (char ch : name) {
    const auto c = static_cast<unsigned char>(ch);
    if (!(std::isalnum(c) || c == '_')) return false;
  }
  return true;
}

namespace {

bool lookup_function(std::string_view name, UnaryOp& op) {
  static constexpr std::pair<std::string_view, UnaryOp> table[] = {
      {"cos", UnaryOp::Cos},   {"sin", UnaryOp::Sin}, {"tan", UnaryOp::Tan},
      {"sqrt", UnaryOp::Sqrt}, {"exp", UnaryOp::Exp}, {"log", UnaryOp::Log},
      {"abs", UnaryOp::Abs},
  };
  for (const auto& [n, o] : table) {
    if (n == name) {
      op = o;
      return true;
    }
  }
  return false;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  ExprPtr parse() {
    skip_ws();
    if (pos_ == text_.size()) {
      throw SyntaxError("empty expression", 0);
    }
    ExprPtr e = expr();
    skip_ws();
    if (pos_ != text_.size()) {
      throw SyntaxError(std::string("unexpected '") + text_[pos_] + "'", pos_);
    }
    return e;
  }

 private:
  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) {
      if (pos_ >= text_.size()) {
        throw SyntaxError(std::string("expected '") + c + "' before end of input", pos_);
      }
      throw SyntaxError(std::string("expected '") + c + "'", pos_);
    }
  }

  ExprPtr expr() {
    ExprPtr lhs = term();
    for (;;) {
      if (accept('+')) {
        lhs = ExpressionNode::make_binary(BinaryOp::Add, lhs, term());
      } else if (accept('-')) {
        lhs = ExpressionNode::make_binary(BinaryOp::Sub, lhs, term());
      } else {
        return lhs;
      }
    }
  }

  ExprPtr term() {
    ExprPtr lhs = factor();
    for (;;) {
      if (accept('*')) {
        lhs = ExpressionNode::make_binary(BinaryOp::Mul, lhs, factor());
      } else if (accept('/')) {
        lhs = ExpressionNode::make_binary(BinaryOp::Div, lhs, factor());
      } else {
        return lhs;
      }
    }
  }

  ExprPtr factor() {
    if (accept('-')) {
      return ExpressionNode::make_unary(UnaryOp::Neg, factor());
    }
    ExprPtr base = primary();
    if (accept('^')) {
      return ExpressionNode::make_power(base, factor());
    }
    return base;
  }

  ExprPtr primary() {
    skip_ws();
    if (pos_ >= text_.size()) {
      throw SyntaxError("unexpected end of input", pos_);
    }
    const char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      return number();
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
        ++pos_;
      }
      const std::string_view name = text_.substr(start, pos_ - start);
      skip_ws();
      if (pos_ < text_.size() && text_[pos_] == '(') {
        UnaryOp op{};
        if (!lookup_function(name, op)) {
          throw Error(ErrorCode::UnknownFunction,
                      "'" + std::string(name) + "' at offset " + std::to_string(start));
        }
        ++pos_;
        ExprPtr arg = expr();
        expect(')');
        return ExpressionNode::make_unary(op, arg);
      }
      if (name == "pi") return ExpressionNode::make_constant(M_PI);
      if (name == "theta") return ExpressionNode::make_theta();
      return ExpressionNode::make_parameter(std::string(name));
    }
    if (c == '(') {
      ++pos_;
      ExprPtr inner = expr();
      expect(')');
      return inner;
    }
    throw SyntaxError(std::string("unexpected '") + c + "'", pos_);
  }

  // digits [. digits] [(e|E) [+-] digits], or . digits ...
  ExprPtr number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      std::size_t n = 0;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        ++pos_;
        ++n;
      }
      return n;
    };
    std::size_t mantissa = digits();
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      mantissa += digits();
    }
    if (mantissa == 0) {
      throw SyntaxError("malformed number", start);
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      // Only an exponent if digits follow; "2e" alone is a syntax error.
      std::size_t save = pos_;
      ++pos_;
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
      if (digits() == 0) {
        throw SyntaxError("malformed exponent", save);
      }
    }
    const std::string literal(text_.substr(start, pos_ - start));
    errno = 0;
    const double value = std::strtod(literal.c_str(), nullptr);
    if (errno == ERANGE && !std::isfinite(value)) {
      throw SyntaxError("number out of range", start);
    }
    return ExpressionNode::make_constant(value);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

std::string_view unary_name(UnaryOp op) {
  switch (op) {
    case UnaryOp::Neg: return "-";
    case UnaryOp::Cos: return "cos";
    case UnaryOp::Sin: return "sin";
    case UnaryOp::Tan: return "tan";
    case UnaryOp::Sqrt: return "sqrt";
    case UnaryOp::Exp: return "exp";
    case UnaryOp::Log: return "log";
    case UnaryOp::Abs: return "abs";
  }
  return "?";
}

char binary_symbol(BinaryOp op) {
  switch (op) {
    case BinaryOp::Add: return '+';
    case BinaryOp::Sub: return '-';
    case BinaryOp::Mul: return '*';
    case BinaryOp::Div: return '/';
    case BinaryOp::Pow: return '^';
  }
  return '?';
}

void collect_parameters(const ExpressionNode& n, std::set<std::string>& out) {
  if (n.kind == ExpressionNode::Kind::Parameter) out.insert(n.name);
  if (n.left) collect_parameters(*n.left, out);
  if (n.right) collect_parameters(*n.right, out);
}

}  // namespace

ExprPtr parse_expression(std::string_view text) { return Parser(text).parse(); }

std::string to_string(const ExpressionNode& node) {
  using Kind = ExpressionNode::Kind;
  switch (node.kind) {
    case Kind::Constant: {
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", node.constant);
      return node.constant < 0 ? "(" + std::string(buf) + ")" : std::string(buf);
    }
    case Kind::Parameter: return node.name;
    case Kind::Theta: return "theta";
    case Kind::Unary:
      if (node.unary_op == UnaryOp::Neg) return "(-" + to_string(*node.left) + ")";
      return std::string(unary_name(node.unary_op)) + "(" + to_string(*node.left) + ")";
    case Kind::Binary:
    case Kind::Power:
      return "(" + to_string(*node.left) + binary_symbol(node.binary_op) +
             to_string(*node.right) + ")";
  }
  return {};
}

std::set<std::string> free_parameters(const ExpressionNode& node) {
  std::set<std::string> out;
  collect_parameters(node, out);
  return out;
}

bool depends_on_theta(const ExpressionNode& node) {
  if (node.kind == ExpressionNode::Kind::Theta) return true;
  return (node.left && depends_on_theta(*node.left)) ||
         (node.right && depends_on_theta(*node.right));
}

}  // namespace blowup
