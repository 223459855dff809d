#pragma once

// Closed-form single-variable real functions: an immutable expression tree
// with a small infix parser, a printer whose output re-parses, and checked
// evaluation that reports domain errors instead of producing NaN/inf.

#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <memory>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace hhkit {

/// Raised when an expression is evaluated outside its real domain.
class DomainError : public std::runtime_error {
 public:
  DomainError(std::string node, double x, const std::string& what)
      : std::runtime_error(what + " in '" + node + "' at x=" + format_number(x)),
        node_(std::move(node)), x_(x) {}

  const std::string& node() const noexcept { return node_; }
  double x() const noexcept { return x_; }

  static std::string format_number(double v) {
    std::array<char, 32> buf{};
    std::snprintf(buf.data(), buf.size(), "%.17g", v);
    return buf.data();
  }

 private:
  std::string node_;
  double x_;
};

/// Syntax error or unknown identifier; `offset` is a byte offset into the input.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : std::runtime_error(what + " at offset " + std::to_string(offset)),
        offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

/// Closed interval [lo, hi] with lo < hi, both finite.
struct Interval {
  double lo;
  double hi;

  Interval(double lo_, double hi_) : lo(lo_), hi(hi_) {
    if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi))
      throw std::invalid_argument("interval requires finite lo < hi");
  }
  double width() const noexcept { return hi - lo; }
  double midpoint() const noexcept { return 0.5 * (lo + hi); }
  bool contains(double x) const noexcept { return lo <= x && x <= hi; }
};

class Expr {
 public:
  enum class Kind { Const, Var, Add, Sub, Mul, Div, Pow, Exp, Log, Sqrt, Abs, Affine };

  Expr() : Expr(Kind::Const, 0.0, 0.0, nullptr, nullptr) {}

  static Expr constant(double c) {
    if (!std::isfinite(c)) throw std::invalid_argument("non-finite constant");
    return Expr(Kind::Const, c, 0.0, nullptr, nullptr);
  }
  static Expr variable() { return Expr(Kind::Var, 0.0, 0.0, nullptr, nullptr); }

  static Expr binary(Kind k, const Expr& l, const Expr& r) {
    if (k != Kind::Add && k != Kind::Sub && k != Kind::Mul && k != Kind::Div)
      throw std::invalid_argument("not a binary node kind");
    return Expr(k, 0.0, 0.0, l.node_, r.node_);
  }
  static Expr unary(Kind k, const Expr& arg) {
    if (k != Kind::Exp && k != Kind::Log && k != Kind::Sqrt && k != Kind::Abs)
      throw std::invalid_argument("not a unary node kind");
    return Expr(k, 0.0, 0.0, arg.node_, nullptr);
  }
  static Expr power(const Expr& base, double exponent) {
    if (!std::isfinite(exponent)) throw std::invalid_argument("non-finite exponent");
    return Expr(Kind::Pow, exponent, 0.0, base.node_, nullptr);
  }
  /// x -> inner(p*x + q). Nested affine arguments are folded into one node.
  static Expr affine(const Expr& inner, double p, double q) {
    if (!std::isfinite(p) || !std::isfinite(q)) throw std::invalid_argument("non-finite affine coefficient");
    if (p == 0.0) throw std::invalid_argument("affine argument requires p != 0");
    if (inner.kind() == Kind::Affine) {
      // inner = e(p1*u + q1) with u = p*x + q
      const double p1 = inner.node_->a, q1 = inner.node_->b;
      return affine(Expr(inner.node_->lhs), p1 * p, p1 * q + q1);
    }
    return Expr(Kind::Affine, p, q, inner.node_, nullptr);
  }

  Kind kind() const noexcept { return node_->kind; }
  /// Constant value (Const), exponent (Pow) or slope p (Affine).
  double value() const noexcept { return node_->a; }
  double exponent() const noexcept { return node_->a; }
  double slope() const noexcept { return node_->a; }
  double offset() const noexcept { return node_->b; }
  /// First child (binary lhs, unary/pow/affine argument).
  Expr lhs() const { return Expr(node_->lhs); }
  Expr rhs() const { return Expr(node_->rhs); }
  Expr arg() const { return Expr(node_->lhs); }

  double operator()(double x) const { return eval_node(*node_, x); }
  double eval(double x) const { return eval_node(*node_, x); }

  /// Infix text accepted by `parse`; fully parenthesized, 17 significant digits.
  std::string to_string() const { return print_node(*node_, "x"); }

  bool same_node(const Expr& other) const noexcept { return node_ == other.node_; }

 private:
  struct Node {
    Kind kind;
    double a;
    double b;
    std::shared_ptr<const Node> lhs;
    std::shared_ptr<const Node> rhs;
  };

  Expr(Kind k, double a, double b, std::shared_ptr<const Node> l, std::shared_ptr<const Node> r)
      : node_(std::make_shared<const Node>(Node{k, a, b, std::move(l), std::move(r)})) {}
  explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

  static bool is_integer(double v) noexcept { return std::floor(v) == v; }

  [[noreturn]] static void fail(const Node& n, double x, const char* what) {
    throw DomainError(print_node(n, "x"), x, what);
  }

  static double checked(const Node& n, double x, double v) {
    if (!std::isfinite(v)) fail(n, x, "non-finite value");
    return v;
  }

  static double eval_node(const Node& n, double x) {
    switch (n.kind) {
      case Kind::Const: return n.a;
      case Kind::Var: return x;
      case Kind::Add: return checked(n, x, eval_node(*n.lhs, x) + eval_node(*n.rhs, x));
      case Kind::Sub: return checked(n, x, eval_node(*n.lhs, x) - eval_node(*n.rhs, x));
      case Kind::Mul: return checked(n, x, eval_node(*n.lhs, x) * eval_node(*n.rhs, x));
      case Kind::Div: {
        const double num = eval_node(*n.lhs, x);
        const double den = eval_node(*n.rhs, x);
        if (den == 0.0) fail(n, x, "division by zero");
        return checked(n, x, num / den);
      }
      case Kind::Pow: {
        const double base = eval_node(*n.lhs, x);
        const double e = n.a;
        if (base == 0.0) {
          if (e < 0.0) fail(n, x, "zero raised to a negative power");
          return e == 0.0 ? 1.0 : 0.0;
        }
        if (base < 0.0 && !is_integer(e)) fail(n, x, "negative base with non-integer exponent");
        return checked(n, x, std::pow(base, e));
      }
      case Kind::Exp: return checked(n, x, std::exp(eval_node(*n.lhs, x)));
      case Kind::Log: {
        const double v = eval_node(*n.lhs, x);
        if (!(v > 0.0)) fail(n, x, "log of non-positive argument");
        return std::log(v);
      }
      case Kind::Sqrt: {
        const double v = eval_node(*n.lhs, x);
        if (v < 0.0) fail(n, x, "sqrt of negative argument");
        return std::sqrt(v);
      }
      case Kind::Abs: return std::fabs(eval_node(*n.lhs, x));
      case Kind::Affine: return eval_node(*n.lhs, n.a * x + n.b);
    }
    return 0.0;  // unreachable
  }

  static std::string number(double v) {
    std::string s = DomainError::format_number(v);
    return v < 0.0 ? "(" + s + ")" : s;
  }

  static std::string print_node(const Node& n, const std::string& var) {
    auto bin = [&](const char* op) {
      return "(" + print_node(*n.lhs, var) + " " + op + " " + print_node(*n.rhs, var) + ")";
    };
    auto call = [&](const char* fn) { return std::string(fn) + "(" + print_node(*n.lhs, var) + ")"; };
    switch (n.kind) {
      case Kind::Const: return number(n.a);
      case Kind::Var: return var;
      case Kind::Add: return bin("+");
      case Kind::Sub: return bin("-");
      case Kind::Mul: return bin("*");
      case Kind::Div: return bin("/");
      case Kind::Pow:
        return "(" + print_node(*n.lhs, var) + ")^" + DomainError::format_number(n.a);
      case Kind::Exp: return call("exp");
      case Kind::Log: return call("log");
      case Kind::Sqrt: return call("sqrt");
      case Kind::Abs: return call("abs");
      case Kind::Affine:
        return print_node(*n.lhs, "(" + number(n.a) + "*" + var + " + " + number(n.b) + ")");
    }
    return {};
  }

  std::shared_ptr<const Node> node_;
};

inline Expr operator+(const Expr& a, const Expr& b) { return Expr::binary(Expr::Kind::Add, a, b); }
inline Expr operator-(const Expr& a, const Expr& b) { return Expr::binary(Expr::Kind::Sub, a, b); }
inline Expr operator*(const Expr& a, const Expr& b) { return Expr::binary(Expr::Kind::Mul, a, b); }
inline Expr operator/(const Expr& a, const Expr& b) { return Expr::binary(Expr::Kind::Div, a, b); }
inline Expr operator*(double c, const Expr& e) { return Expr::constant(c) * e; }
inline Expr operator+(const Expr& e, double c) { return e + Expr::constant(c); }
inline Expr operator-(const Expr& e, double c) { return e - Expr::constant(c); }

inline Expr pow(const Expr& base, double exponent) { return Expr::power(base, exponent); }
inline Expr exp(const Expr& e) { return Expr::unary(Expr::Kind::Exp, e); }
inline Expr log(const Expr& e) { return Expr::unary(Expr::Kind::Log, e); }
inline Expr sqrt(const Expr& e) { return Expr::unary(Expr::Kind::Sqrt, e); }
inline Expr abs(const Expr& e) { return Expr::unary(Expr::Kind::Abs, e); }

/// x -> f(p*x + q). p = 1, q = 0 returns f itself.
inline Expr compose_affine(const Expr& f, double p, double q) {
  if (p == 1.0 && q == 0.0) return f;
  return Expr::affine(f, p, q);
}

/// x -> c1*f(x) + c2*g(x).
inline Expr lin_comb(double c1, const Expr& f, double c2, const Expr& g) {
  return c1 * f + c2 * g;
}

namespace detail {

class Parser {
 public:
  explicit Parser(std::string_view text) : s_(text) {}

  Expr parse() {
    Expr e = expr();
    skip_ws();
    if (pos_ != s_.size()) throw ParseError("unexpected '" + std::string(1, s_[pos_]) + "'", pos_);
    return e;
  }

 private:
  std::string_view s_;
  std::size_t pos_ = 0;

  void skip_ws() {
    while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t' || s_[pos_] == '\n' || s_[pos_] == '\r'))
      ++pos_;
  }
  bool accept(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!accept(c)) {
      if (pos_ >= s_.size()) throw ParseError(std::string("expected '") + c + "' but input ended", pos_);
      throw ParseError(std::string("expected '") + c + "'", pos_);
    }
  }
  static bool is_digit(char c) { return c >= '0' && c <= '9'; }
  static bool is_alpha(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; }

  Expr expr() {
    Expr lhs = term();
    for (;;) {
      if (accept('+')) lhs = lhs + term();
      else if (accept('-')) lhs = lhs - term();
      else return lhs;
    }
  }

  Expr term() {
    Expr lhs = factor();
    for (;;) {
      if (accept('*')) lhs = lhs * factor();
      else if (accept('/')) lhs = lhs / factor();
      else return lhs;
    }
  }

  // ^ binds tighter than unary minus: -x^2 = -(x^2).
  Expr factor() {
    const bool negate = accept('-');
    Expr b = base();
    if (accept('^')) {
      skip_ws();
      double sign = 1.0;
      if (pos_ < s_.size() && (s_[pos_] == '-' || s_[pos_] == '+')) {
        sign = s_[pos_] == '-' ? -1.0 : 1.0;
        ++pos_;
      }
      b = pow(b, sign * number());
    }
    if (!negate) return b;
    if (b.kind() == Expr::Kind::Const) return Expr::constant(-b.value());
    return Expr::constant(-1.0) * b;
  }

  Expr base() {
    skip_ws();
    if (pos_ >= s_.size()) throw ParseError("unexpected end of input", pos_);
    const char c = s_[pos_];
    if (is_digit(c) || c == '.') return Expr::constant(number());
    if (c == '(') {
      ++pos_;
      Expr e = expr();
      expect(')');
      return e;
    }
    if (is_alpha(c)) {
      const std::size_t start = pos_;
      while (pos_ < s_.size() && (is_alpha(s_[pos_]) || is_digit(s_[pos_]))) ++pos_;
      const std::string_view id = s_.substr(start, pos_ - start);
      if (id == "x") return Expr::variable();
      if (id == "e") return Expr::constant(std::numbers::e);
      if (id == "pi") return Expr::constant(std::numbers::pi);
      Expr::Kind k;
      if (id == "exp") k = Expr::Kind::Exp;
      else if (id == "log") k = Expr::Kind::Log;
      else if (id == "sqrt") k = Expr::Kind::Sqrt;
      else if (id == "abs") k = Expr::Kind::Abs;
      else throw ParseError("unknown identifier '" + std::string(id) + "'", start);
      expect('(');
      Expr arg = expr();
      expect(')');
      return Expr::unary(k, arg);
    }
    throw ParseError("unexpected '" + std::string(1, c) + "'", pos_);
  }

  // Decimal literal: digits [. digits] [(e|E) [+-] digits].
  double number() {
    skip_ws();
    const std::size_t start = pos_;
    std::size_t digits = 0;
    while (pos_ < s_.size() && is_digit(s_[pos_])) ++pos_, ++digits;
    if (pos_ < s_.size() && s_[pos_] == '.') {
      ++pos_;
      while (pos_ < s_.size() && is_digit(s_[pos_])) ++pos_, ++digits;
    }
    if (digits == 0) throw ParseError("expected a number", start);
    if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
      std::size_t p = pos_ + 1;
      if (p < s_.size() && (s_[p] == '+' || s_[p] == '-')) ++p;
      if (p < s_.size() && is_digit(s_[p])) {
        while (p < s_.size() && is_digit(s_[p])) ++p;
        pos_ = p;
      }
    }
    double v = 0.0;
    const auto res = std::from_chars(s_.data() + start, s_.data() + pos_, v);
    if (res.ec != std::errc() || res.ptr != s_.data() + pos_ || !std::isfinite(v))
      throw ParseError("malformed number", start);
    return v;
  }
};

}  // namespace detail

/// Parses the infix grammar: + - * / ^, unary minus, x, e, pi, exp/log/sqrt/abs.
inline Expr parse(std::string_view text) { return detail::Parser(text).parse(); }

}  // namespace hhkit
