#include "blowup/potential.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <boost/math/constants/constants.hpp>

namespace blowup {

Domain Domain::interval(double lo, double hi) {
  if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi) || hi > lo + 2.0 * M_PI + 1e-12) {
    throw Error(ErrorCode::InvalidArgument, "domain needs finite a < b <= a + 2pi");
  }
  return Domain{false, lo, hi};
}

bool Domain::contains(double theta) const {
  if (periodic) return std::isfinite(theta);
  return theta > lo && theta < hi;
}

PotentialSpec PotentialSpec::from_builtin(std::string name, std::map<std::string, double> params) {
  PotentialSpec s;
  s.builtin = std::move(name);
  s.params = std::move(params);
  return s;
}

PotentialSpec PotentialSpec::from_expression(std::string text, double beta,
                                             std::map<std::string, double> params) {
  PotentialSpec s;
  s.expr = std::move(text);
  s.beta = beta;
  s.params = std::move(params);
  return s;
}

const std::vector<BuiltinInfo>& builtins() {
  static const std::vector<BuiltinInfo> table = {
      {"isosceles",
       "-1/cos(theta) - 4*alpha^(3/2)/sqrt(alpha + 2*sin(theta)^2)",
       -1.0,
       {"alpha"},
       std::make_pair(-M_PI / 2, M_PI / 2)},
      {"yoshida_g",
       "-(cos(theta)^4 + sin(theta)^4)/4 - (epsilon/2)*cos(theta)^2*sin(theta)^2",
       4.0,
       {"epsilon"},
       std::nullopt},
      {"yoshida_h",
       "(cos(theta)^4 + sin(theta)^4)/4 + (epsilon/2)*cos(theta)^2*sin(theta)^2",
       4.0,
       {"epsilon"},
       std::nullopt},
  };
  return table;
}

namespace {

Jet2<double> eval_constant_tree(const ExpressionNode& n) {
  using Kind = ExpressionNode::Kind;
  switch (n.kind) {
    case Kind::Constant: return lift_constant(n.constant);
    case Kind::Unary: return apply_unary(n.unary_op, eval_constant_tree(*n.left));
    case Kind::Binary:
    case Kind::Power:
      return apply_binary(n.binary_op, eval_constant_tree(*n.left), eval_constant_tree(*n.right));
    case Kind::Parameter:
    case Kind::Theta: break;
  }
  throw Error(ErrorCode::InvalidArgument, "constant folding reached a free symbol");
}

// Substitute parameters, then collapse theta-free subtrees into constants.
ExprPtr bind_and_fold(const ExprPtr& n, const std::map<std::string, double>& params) {
  using Kind = ExpressionNode::Kind;
  switch (n->kind) {
    case Kind::Constant:
    case Kind::Theta: return n;
    case Kind::Parameter: {
      auto it = params.find(n->name);
      if (it == params.end()) {
        throw Error(ErrorCode::UnboundParameter, "parameter '" + n->name + "' has no value");
      }
      return ExpressionNode::make_constant(it->second);
    }
    case Kind::Unary:
    case Kind::Binary:
    case Kind::Power: break;
  }
  ExprPtr left = bind_and_fold(n->left, params);
  ExprPtr right = n->right ? bind_and_fold(n->right, params) : nullptr;
  ExprPtr rebuilt;
  if (n->kind == Kind::Unary) {
    rebuilt = ExpressionNode::make_unary(n->unary_op, left);
  } else if (n->kind == Kind::Power) {
    if (depends_on_theta(*right)) {
      throw Error(ErrorCode::UnsupportedExpression, "exponents must not depend on theta");
    }
    rebuilt = ExpressionNode::make_power(left, right);
  } else {
    rebuilt = ExpressionNode::make_binary(n->binary_op, left, right);
  }
  if (!depends_on_theta(*rebuilt)) {
    return ExpressionNode::make_constant(eval_constant_tree(*rebuilt).value);
  }
  return rebuilt;
}

template <typename T>
T two_pi() {
  return T(2) * boost::math::constants::pi<T>();
}

}  // namespace

void Potential::emit(const ExpressionNode& node) {
  using Kind = ExpressionNode::Kind;
  switch (node.kind) {
    case Kind::Constant: program_.push_back({Instr::Op::PushConst, node.constant}); return;
    case Kind::Theta: program_.push_back({Instr::Op::PushTheta}); return;
    case Kind::Unary:
      emit(*node.left);
      program_.push_back({Instr::Op::Unary, 0.0, node.unary_op});
      return;
    case Kind::Power:
      emit(*node.left);
      program_.push_back({Instr::Op::PowConst, node.right->constant});
      return;
    case Kind::Binary:
      emit(*node.left);
      emit(*node.right);
      program_.push_back({Instr::Op::Binary, 0.0, UnaryOp::Neg, node.binary_op});
      return;
    case Kind::Parameter: break;
  }
  throw Error(ErrorCode::UnboundParameter, "unbound parameter '" + node.name + "'");
}

Potential compile(const PotentialSpec& spec) {
  const bool has_expr = !spec.expr.empty();
  const bool has_builtin = !spec.builtin.empty();
  if (has_expr == has_builtin) {
    throw Error(ErrorCode::SchemaViolation, "exactly one of expr / builtin must be given");
  }

  Potential pot;
  pot.spec_ = spec;
  std::string text;
  std::optional<std::pair<double, double>> domain = spec.domain;

  if (has_builtin) {
    const auto& table = builtins();
    auto it = std::find_if(table.begin(), table.end(),
                           [&](const BuiltinInfo& b) { return b.name == spec.builtin; });
    if (it == table.end()) {
      throw Error(ErrorCode::UnknownBuiltin, "'" + spec.builtin + "'");
    }
    if (spec.beta && *spec.beta != it->beta) {
      throw Error(ErrorCode::SchemaViolation,
                  "builtin '" + it->name + "' has beta " + std::to_string(it->beta));
    }
    text = it->expression;
    pot.beta_ = it->beta;
    if (!domain) domain = it->domain;
  } else {
    if (!spec.beta) {
      throw Error(ErrorCode::SchemaViolation, "expression potentials need beta");
    }
    text = spec.expr;
    pot.beta_ = *spec.beta;
  }
  if (!std::isfinite(pot.beta_)) {
    throw Error(ErrorCode::SchemaViolation, "beta must be finite");
  }
  for (const auto& [name, value] : spec.params) {
    if (!is_valid_identifier(name)) {
      throw Error(ErrorCode::SchemaViolation, "invalid parameter name '" + name + "'");
    }
    if (!std::isfinite(value)) {
      throw Error(ErrorCode::SchemaViolation, "parameter '" + name + "' is not finite");
    }
  }

  pot.domain_ = domain ? Domain::interval(domain->first, domain->second) : Domain::circle();

  ExprPtr tree = parse_expression(text);
  for (const auto& name : free_parameters(*tree)) {
    if (!spec.params.count(name)) {
      throw Error(ErrorCode::UnboundParameter, "parameter '" + name + "' has no value");
    }
  }
  pot.bound_ = bind_and_fold(tree, spec.params);
  pot.emit(*pot.bound_);
  return pot;
}

std::string Potential::expression_text() const {
  std::string body = to_string(*bound_);
  return negated_ ? "(-" + body + ")" : body;
}

Potential Potential::negate() const {
  Potential out = *this;
  out.negated_ = !negated_;
  out.program_.push_back({Instr::Op::Unary, 0.0, UnaryOp::Neg});
  return out;
}

template <typename T>
Jet2<T> Potential::eval(T theta) const {
  using std::floor;
  using std::isfinite;
  if (!isfinite(theta)) {
    throw Error(ErrorCode::DomainError, "non-finite theta");
  }
  if (domain_.periodic) {
    const T period = two_pi<T>();
    if (theta < T(0) || theta >= period) {
      theta -= period * floor(theta / period);
    }
  } else if (!(theta > T(domain_.lo) && theta < T(domain_.hi))) {
    throw Error(ErrorCode::DomainError, "theta outside the potential's domain");
  }

  std::vector<Jet2<T>> stack;
  stack.reserve(16);
  for (const Instr& ins : program_) {
    switch (ins.op) {
      case Instr::Op::PushConst: stack.push_back(lift_constant(T(ins.value))); break;
      case Instr::Op::PushTheta: stack.push_back(lift_variable(theta)); break;
      case Instr::Op::Unary: stack.back() = apply_unary(ins.unary, stack.back()); break;
      case Instr::Op::PowConst: stack.back() = pow(stack.back(), T(ins.value)); break;
      case Instr::Op::Binary: {
        const Jet2<T> rhs = stack.back();
        stack.pop_back();
        stack.back() = apply_binary(ins.binary, stack.back(), rhs);
        break;
      }
    }
  }
  return stack.back();
}

template Jet2<double> Potential::eval<double>(double) const;
template Jet2<quad> Potential::eval<quad>(quad) const;

std::optional<double> Potential::to_domain(double theta) const {
  if (!std::isfinite(theta)) return std::nullopt;
  if (domain_.periodic) return theta;
  const double period = 2.0 * M_PI;
  double t = theta - period * std::floor((theta - domain_.lo) / period);
  if (domain_.contains(t)) return t;
  return std::nullopt;
}

double Potential::eval_U(const Vec2& q) const {
  const double r = std::hypot(q[0], q[1]);
  if (r == 0.0) {
    throw Error(ErrorCode::OriginSingularity, "U is singular at q = 0");
  }
  const auto theta = to_domain(std::atan2(q[1], q[0]));
  if (!theta) {
    throw Error(ErrorCode::DomainError, "direction of q lies outside the potential's domain");
  }
  return std::pow(r, beta_) * eval(*theta).value;
}

Vec2 Potential::grad_U(const Vec2& q) const {
  const double r = std::hypot(q[0], q[1]);
  if (r == 0.0) {
    throw Error(ErrorCode::OriginSingularity, "grad U is singular at q = 0");
  }
  const auto theta = to_domain(std::atan2(q[1], q[0]));
  if (!theta) {
    throw Error(ErrorCode::DomainError, "direction of q lies outside the potential's domain");
  }
  const Jet2<double> v = eval(*theta);
  const double scale = std::pow(r, beta_ - 1.0);
  const double c = q[0] / r;
  const double s = q[1] / r;
  const double radial = beta_ * v.value;
  const double tangential = v.d1;
  return {scale * (radial * c - tangential * s), scale * (radial * s + tangential * c)};
}

}  // namespace blowup
