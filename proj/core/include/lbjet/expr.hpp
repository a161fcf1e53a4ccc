#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "lbjet/poly.hpp"

namespace lbjet {

/// Raised when evaluation hits an unbound variable, a vanishing denominator or
/// a function outside its real domain.
class EvalError : public std::runtime_error {
 public:
  enum class Kind { UnboundVariable, DivisionByZero, Domain };
  EvalError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

/// Exact rational or double. Arithmetic stays exact while both sides are exact.
class Number {
 public:
  Number() : v_(Rational(0)) {}
  Number(Rational q) : v_(std::move(q)) {}  // NOLINT(google-explicit-constructor)
  Number(double d) : v_(d) {}               // NOLINT(google-explicit-constructor)
  Number(int i) : v_(Rational(i)) {}        // NOLINT(google-explicit-constructor)

  bool is_exact() const { return std::holds_alternative<Rational>(v_); }
  const Rational& exact() const { return std::get<Rational>(v_); }
  double to_double() const;
  bool is_zero() const;

  Number operator+(const Number& o) const;
  Number operator-(const Number& o) const;
  Number operator*(const Number& o) const;
  /// Throws EvalError on a zero divisor.
  Number operator/(const Number& o) const;
  Number operator-() const;
  Number pow(int k) const;

  std::string to_string() const;

 private:
  std::variant<Rational, double> v_;
};

using Valuation = std::map<Var, Number>;

/// Immutable symbolic expression kept in rational-function normal form.
class Expr {
 public:
  enum class Kind { Constant, Variable, Function, Sum, Product, Power, Quotient };

  Expr();
  Expr(int c);                    // NOLINT(google-explicit-constructor)
  Expr(const Rational& c);        // NOLINT(google-explicit-constructor)
  explicit Expr(RatFunc rf);

  static Expr constant(const Rational& c) { return Expr(c); }
  static Expr var(const Var& v);
  static Expr base(int i) { return var(Var::base(i)); }
  static Expr jet(int component, MultiIndex alpha) { return var(Var::jet(component, std::move(alpha))); }
  /// Jet coordinate y^k_L for n = 1.
  static Expr jet1(int component, int k) { return jet(component, MultiIndex{k}); }
  static Expr symbol(const std::string& name) { return var(Var::symbol(name)); }
  static Expr func(FuncKind f, const Expr& arg);

  const RatFunc& rf() const { return *rf_; }

  Kind kind() const;
  /// Tree view of the normal form: summands, factors, base/exponent,
  /// numerator/denominator, or a function argument.
  std::vector<Expr> children() const;

  bool is_constant() const { return rf_->is_constant(); }
  bool is_rational_constant(Rational* out = nullptr) const;
  bool is_structurally_zero() const { return rf_->is_zero(); }
  bool is_polynomial() const { return rf_->is_polynomial(); }
  bool has_function() const;
  /// Count of terms and factors across the whole tree; used as a growth budget.
  std::size_t node_count() const;

  Expr operator+(const Expr& o) const { return Expr(*rf_ + *o.rf_); }
  Expr operator-(const Expr& o) const { return Expr(*rf_ - *o.rf_); }
  Expr operator*(const Expr& o) const { return Expr(*rf_ * *o.rf_); }
  /// Throws std::domain_error when `o` is structurally zero.
  Expr operator/(const Expr& o) const { return Expr(*rf_ / *o.rf_); }
  Expr operator-() const { return Expr(-*rf_); }
  Expr& operator+=(const Expr& o) { return *this = *this + o; }
  Expr& operator-=(const Expr& o) { return *this = *this - o; }
  Expr& operator*=(const Expr& o) { return *this = *this * o; }
  Expr pow(int k) const { return Expr(rf_->pow(k)); }

  std::string to_string() const;

  friend bool operator==(const Expr& a, const Expr& b) { return *a.rf_ == *b.rf_; }

 private:
  std::shared_ptr<const RatFunc> rf_;
};

inline Expr operator+(int a, const Expr& b) { return Expr(a) + b; }
inline Expr operator-(int a, const Expr& b) { return Expr(a) - b; }
inline Expr operator*(int a, const Expr& b) { return Expr(a) * b; }

Expr sin(const Expr& e);
Expr cos(const Expr& e);
Expr exp(const Expr& e);
Expr ln(const Expr& e);
Expr sqrt(const Expr& e);

/// Partial derivative; jet coordinates are independent indeterminates.
Expr diff(const Expr& e, const Var& v);

/// Derivation determined by its value on each variable (chain rule through
/// function atoms). diff and the total derivatives are instances.
Expr derive(const Expr& e, const std::function<Expr(const Var&)>& on_var);

/// Every variable occurring in `e`, including inside function arguments.
std::set<Var> free_vars(const Expr& e);

/// Jet coordinates occurring in `e`.
std::set<Var> jet_vars(const Expr& e);

/// Highest jet order occurring in `e` (-1 when no jet occurs).
int max_jet_order(const Expr& e);

/// Simultaneous substitution; the result is renormalized.
Expr substitute(const Expr& e, const std::map<Var, Expr>& bindings);

/// Exact when all inputs are exact and no function node is evaluated.
Number eval(const Expr& e, const Valuation& v);

double eval_double(const Expr& e, const std::map<Var, double>& v);

enum class ZeroStatus { ProvablyZero, ProvablyNonzero, Unknown };

const char* to_string(ZeroStatus z);

struct ZeroTestOptions {
  int samples = 20;
  std::uint64_t seed = 42;
  int max_retries = 50;
  double tolerance = 1e-10;  // relative to the sum of |term values|
};

/// Tri-state zero test. Structural zero of the normal form is a proof; a
/// nonzero normal form without function nodes is a nonzero rational function.
/// Otherwise random rational samples decide: any clearly nonzero value proves
/// nonzero, all-vanishing samples give Unknown.
ZeroStatus is_zero(const Expr& e, const ZeroTestOptions& opts = {});

/// Flattened evaluator for repeated double-precision evaluation.
class CompiledExpr {
 public:
  CompiledExpr() = default;
  /// `slots` fixes the argument order of operator().
  CompiledExpr(const Expr& e, const std::vector<Var>& slots);

  /// Throws EvalError on a vanishing denominator or domain error.
  double operator()(const double* args) const;

  struct Node;

 private:
  std::shared_ptr<const Node> root_;
};

}  // namespace lbjet
