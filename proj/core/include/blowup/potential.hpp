#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "blowup/expression.hpp"
#include "blowup/jet.hpp"
#include "blowup/scalar.hpp"

namespace blowup {

using Vec2 = std::array<double, 2>;

/// Angular domain of V. Periodic domains are the full circle [0, 2pi);
/// otherwise V lives on the open interval (lo, hi) with hi - lo <= 2pi.
struct Domain {
  bool periodic = true;
  double lo = 0.0;
  double hi = 2.0 * M_PI;

  static Domain circle() { return {}; }
  static Domain interval(double lo, double hi);

  double length() const { return hi - lo; }
  bool contains(double theta) const;
  bool operator==(const Domain&) const = default;
};

/// User-facing description of V(theta); compile() turns it into a Potential.
struct PotentialSpec {
  std::optional<double> beta;  // required for expressions, implied by builtins
  std::string expr;            // exactly one of expr / builtin is non-empty
  std::string builtin;
  std::map<std::string, double> params;
  std::optional<std::pair<double, double>> domain;

  static PotentialSpec from_builtin(std::string name, std::map<std::string, double> params = {});
  static PotentialSpec from_expression(std::string text, double beta,
                                       std::map<std::string, double> params = {});
};

struct BuiltinInfo {
  std::string name;
  std::string expression;
  double beta;
  std::vector<std::string> parameters;
  std::optional<std::pair<double, double>> domain;
};

const std::vector<BuiltinInfo>& builtins();

/// Immutable, parameter-bound V(theta) with its homogeneity degree. Cheap to
/// copy; the compiled program is shared.
class Potential {
 public:
  double beta() const { return beta_; }
  const Domain& domain() const { return domain_; }
  const PotentialSpec& spec() const { return spec_; }
  /// True when this is -V of the compiled spec (sign-flipped).
  bool negated() const { return negated_; }
  /// The bound expression as text (parameters substituted).
  std::string expression_text() const;

  /// V, V', V'' at theta. Periodic domains reduce theta mod 2pi; open domains
  /// raise DomainError outside (lo, hi).
  template <typename T>
  Jet2<T> eval(T theta) const;

  /// Angle equivalent to theta (mod 2pi) inside the domain, if any.
  std::optional<double> to_domain(double theta) const;

  /// U(q) = |q|^beta V(atan2(q2, q1)).
  double eval_U(const Vec2& q) const;
  /// grad U from the jet: radial beta r^{beta-1} V, tangential r^{beta-1} V'.
  Vec2 grad_U(const Vec2& q) const;

  Potential negate() const;

 private:
  friend Potential compile(const PotentialSpec& spec);

  struct Instr {
    enum class Op { PushConst, PushTheta, Unary, Binary, PowConst };
    Op op;
    double value = 0.0;
    UnaryOp unary = UnaryOp::Neg;
    BinaryOp binary = BinaryOp::Add;
  };

  void emit(const ExpressionNode& node);

  std::vector<Instr> program_;
  ExprPtr bound_;
  double beta_ = 0.0;
  Domain domain_;
  PotentialSpec spec_;
  bool negated_ = false;
};

Potential compile(const PotentialSpec& spec);

/// Convenience: V, V', V'' in double precision.
inline Jet2<double> eval_V(const Potential& pot, double theta) { return pot.eval(theta); }

inline double eval_U_cartesian(const Potential& pot, const Vec2& q) { return pot.eval_U(q); }

extern template Jet2<double> Potential::eval<double>(double) const;
extern template Jet2<quad> Potential::eval<quad>(quad) const;

}  // namespace blowup
