#pragma once

// Second-order forward-mode jets: (f, f', f'') with respect to theta.

#include <cmath>
#include <limits>
#include <string>

#include "blowup/error.hpp"

namespace blowup {

template <typename T>
struct Jet2 {
  T value{0};
  T d1{0};
  T d2{0};

  friend bool operator==(const Jet2&, const Jet2&) = default;
};

template <typename T>
constexpr Jet2<T> lift_variable(T theta) {
  return {theta, T(1), T(0)};
}

template <typename T>
constexpr Jet2<T> lift_constant(T c) {
  return {c, T(0), T(0)};
}

namespace detail {

template <typename T>
Jet2<T> checked(Jet2<T> j, const char* op) {
  using std::isfinite;
  if (!isfinite(j.value) || !isfinite(j.d1) || !isfinite(j.d2)) {
    throw Error(ErrorCode::DomainError, std::string("non-finite result in ") + op);
  }
  return j;
}

// f(u) given f(u), f'(u), f''(u) at u = a.value.
template <typename T>
Jet2<T> chain(const Jet2<T>& a, T f, T df, T ddf) {
  return {f, df * a.d1, ddf * a.d1 * a.d1 + df * a.d2};
}

template <typename T>
bool is_integral(T x) {
  using std::floor;
  return floor(x) == x;
}

}  // namespace detail

template <typename T>
Jet2<T> operator+(const Jet2<T>& a, const Jet2<T>& b) {
  return detail::checked(Jet2<T>{a.value + b.value, a.d1 + b.d1, a.d2 + b.d2}, "add");
}

template <typename T>
Jet2<T> operator-(const Jet2<T>& a, const Jet2<T>& b) {
  return detail::checked(Jet2<T>{a.value - b.value, a.d1 - b.d1, a.d2 - b.d2}, "sub");
}

template <typename T>
Jet2<T> operator-(const Jet2<T>& a) {
  return {-a.value, -a.d1, -a.d2};
}

template <typename T>
Jet2<T> operator*(const Jet2<T>& a, const Jet2<T>& b) {
  return detail::checked(Jet2<T>{a.value * b.value, a.d1 * b.value + a.value * b.d1,
                                 a.d2 * b.value + T(2) * a.d1 * b.d1 + a.value * b.d2},
                         "mul");
}

template <typename T>
Jet2<T> operator/(const Jet2<T>& a, const Jet2<T>& b) {
  if (b.value == T(0)) {
    throw Error(ErrorCode::DivisionByZero, "jet division by a zero value");
  }
  const T q = a.value / b.value;
  const T q1 = (a.d1 - q * b.d1) / b.value;
  const T q2 = (a.d2 - T(2) * q1 * b.d1 - q * b.d2) / b.value;
  return detail::checked(Jet2<T>{q, q1, q2}, "div");
}

/// u^c for a constant exponent c. Non-integer exponents need u > 0; integer
/// exponents accept any sign of u, and negative integers need u != 0.
template <typename T>
Jet2<T> pow(const Jet2<T>& a, T c) {
  using std::pow;
  const T u = a.value;
  const bool integral = detail::is_integral(c);
  if (!integral && !(u > T(0))) {
    throw Error(ErrorCode::DomainError, "pow with non-integer exponent needs a positive base");
  }
  if (c == T(0)) {
    return lift_constant(T(1));
  }
  if (integral && c < T(0) && u == T(0)) {
    throw Error(ErrorCode::DivisionByZero, "negative integer power of zero");
  }
  const T f = pow(u, c);
  const T df = c * pow(u, c - T(1));
  const T ddf = (c == T(1)) ? T(0) : c * (c - T(1)) * pow(u, c - T(2));
  return detail::checked(detail::chain(a, f, df, ddf), "pow");
}

template <typename T>
Jet2<T> sin(const Jet2<T>& a) {
  using std::cos;
  using std::sin;
  const T s = sin(a.value);
  const T c = cos(a.value);
  return detail::chain(a, s, c, -s);
}

template <typename T>
Jet2<T> cos(const Jet2<T>& a) {
  using std::cos;
  using std::sin;
  const T s = sin(a.value);
  const T c = cos(a.value);
  return detail::chain(a, c, -s, -c);
}

template <typename T>
Jet2<T> tan(const Jet2<T>& a) {
  using std::abs;
  using std::cos;
  using std::tan;
  if (abs(cos(a.value)) <= T(16) * std::numeric_limits<T>::epsilon()) {
    throw Error(ErrorCode::DomainError, "tan at a pole");
  }
  const T t = tan(a.value);
  const T sec2 = T(1) + t * t;
  return detail::checked(detail::chain(a, t, sec2, T(2) * t * sec2), "tan");
}

template <typename T>
Jet2<T> sqrt(const Jet2<T>& a) {
  using std::sqrt;
  if (!(a.value > T(0))) {
    throw Error(ErrorCode::DomainError, "sqrt of a non-positive value");
  }
  const T s = sqrt(a.value);
  const T ds = T(1) / (T(2) * s);
  return detail::checked(detail::chain(a, s, ds, -ds / (T(2) * a.value)), "sqrt");
}

template <typename T>
Jet2<T> exp(const Jet2<T>& a) {
  using std::exp;
  const T e = exp(a.value);
  return detail::checked(detail::chain(a, e, e, e), "exp");
}

template <typename T>
Jet2<T> log(const Jet2<T>& a) {
  using std::log;
  if (!(a.value > T(0))) {
    throw Error(ErrorCode::DomainError, "log of a non-positive value");
  }
  const T inv = T(1) / a.value;
  return detail::checked(detail::chain(a, log(a.value), inv, -inv * inv), "log");
}

template <typename T>
Jet2<T> abs(const Jet2<T>& a) {
  if (a.value == T(0)) {
    throw Error(ErrorCode::DomainError, "abs is not differentiable at 0");
  }
  return a.value > T(0) ? a : -a;
}

enum class UnaryOp { Neg, Cos, Sin, Tan, Sqrt, Exp, Log, Abs };
enum class BinaryOp { Add, Sub, Mul, Div, Pow };

template <typename T>
Jet2<T> apply_unary(UnaryOp op, const Jet2<T>& a) {
  switch (op) {
    case UnaryOp::Neg: return -a;
    case UnaryOp::Cos: return cos(a);
    case UnaryOp::Sin: return sin(a);
    case UnaryOp::Tan: return tan(a);
    case UnaryOp::Sqrt: return sqrt(a);
    case UnaryOp::Exp: return exp(a);
    case UnaryOp::Log: return log(a);
    case UnaryOp::Abs: return abs(a);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown unary op");
}

/// Pow requires b to be a constant jet (zero derivatives).
template <typename T>
Jet2<T> apply_binary(BinaryOp op, const Jet2<T>& a, const Jet2<T>& b) {
  switch (op) {
    case BinaryOp::Add: return a + b;
    case BinaryOp::Sub: return a - b;
    case BinaryOp::Mul: return a * b;
    case BinaryOp::Div: return a / b;
    case BinaryOp::Pow:
      if (b.d1 != T(0) || b.d2 != T(0)) {
        throw Error(ErrorCode::UnsupportedExpression, "pow exponent must be constant");
      }
      return pow(a, b.value);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown binary op");
}

}  // namespace blowup
