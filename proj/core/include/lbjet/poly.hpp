#pragma once

// Internal representation behind Expr: expanded polynomials over atoms and
// rational functions with a factored denominator. Exposed because the
// truncation module needs to read polynomial structure in high-order jets.

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "lbjet/multi_index.hpp"

namespace lbjet {

using Rational = mpq_class;

/// Nearest double, ties to even (mpq_get_d truncates).
double to_double(const Rational& q);

/// A free variable: base coordinate x_i, jet coordinate y^alpha_L, or a named symbol (t, l, ...).
struct Var {
  enum class Kind : std::uint8_t { Base, Jet, Symbol };

  Kind kind = Kind::Base;
  int index = 1;  // base: i; jet: L
  MultiIndex alpha;
  std::string name;

  static Var base(int i);
  static Var jet(int component, MultiIndex alpha);
  static Var symbol(std::string name);

  bool is_jet() const { return kind == Kind::Jet; }
  int jet_order() const { return is_jet() ? alpha.order() : -1; }
  MultiPair pair() const { return MultiPair{index, alpha}; }
  std::string to_string() const;

  friend bool operator==(const Var& a, const Var& b);
  friend std::strong_ordering operator<=>(const Var& a, const Var& b);
};

enum class FuncKind : std::uint8_t { Sin, Cos, Exp, Ln, Sqrt };

const char* func_name(FuncKind f);

class RatFunc;

struct Atom {
  bool is_function = false;
  Var var;
  FuncKind func = FuncKind::Sin;
  std::shared_ptr<const RatFunc> arg;
};

using AtomPtr = std::shared_ptr<const Atom>;

AtomPtr make_var_atom(const Var& v);
AtomPtr make_func_atom(FuncKind f, RatFunc arg);

/// Total order on atoms: variables before functions, base < jet < symbol.
int compare_atoms(const Atom& a, const Atom& b);

struct Power {
  AtomPtr atom;
  int exp = 0;
};

/// Product of atom powers, atoms strictly ascending.
class Monomial {
 public:
  Monomial() = default;
  explicit Monomial(AtomPtr a, int exp = 1);

  const std::vector<Power>& powers() const { return p_; }
  int degree() const { return degree_; }
  bool is_one() const { return p_.empty(); }
  /// Exponent of the given atom (0 when absent).
  int exponent_of(const Atom& a) const;

  Monomial operator*(const Monomial& o) const;
  bool divides(const Monomial& o) const;
  /// this / o; requires o.divides(*this).
  Monomial quotient(const Monomial& o) const;
  /// Largest monomial dividing both.
  Monomial gcd(const Monomial& o) const;
  /// Removes one power of `a`; returns the exponent it had.
  Monomial without(const Atom& a, int* exp_out) const;

  static Monomial from_powers(std::vector<Power> powers);

 private:
  std::vector<Power> p_;
  int degree_ = 0;
};

/// Graded lexicographic order: <0, 0, >0.
int compare_monomials(const Monomial& a, const Monomial& b);

struct Term {
  Monomial mono;
  Rational coef;
};

/// Expanded polynomial; terms strictly descending in graded-lex order, no zero coefficients.
class Poly {
 public:
  Poly() = default;
  explicit Poly(Rational c);
  explicit Poly(Monomial m, Rational c = 1);

  static Poly from_terms(std::vector<Term> terms);

  const std::vector<Term>& terms() const { return t_; }
  bool is_zero() const { return t_.empty(); }
  bool is_constant() const { return t_.empty() || (t_.size() == 1 && t_[0].mono.is_one()); }
  Rational constant_value() const;
  const Term& leading() const { return t_.front(); }
  bool is_monomial() const { return t_.size() == 1; }

  Poly operator+(const Poly& o) const;
  Poly operator-(const Poly& o) const;
  Poly operator-() const;
  Poly operator*(const Poly& o) const;
  Poly scaled(const Rational& c) const;
  Poly times(const Monomial& m, const Rational& c) const;
  Poly pow(int k) const;

  /// Exact quotient this / d, or nullopt when d does not divide this.
  std::optional<Poly> divide_exact(const Poly& d) const;
  /// gcd of all monomials.
  Monomial monomial_content() const;

  friend bool operator==(const Poly& a, const Poly& b);

 private:
  std::vector<Term> t_;
};

int compare_polys(const Poly& a, const Poly& b);

struct DenFactor {
  Poly poly;  // monic, non-constant
  int exp = 1;
};

/// num / prod(factor^exp). Factors sorted, pairwise distinct, none divides num.
class RatFunc {
 public:
  RatFunc() = default;
  explicit RatFunc(Rational c) : num_(std::move(c)) {}
  explicit RatFunc(Poly p) : num_(std::move(p)) {}
  RatFunc(Poly num, std::vector<DenFactor> den);

  static RatFunc var(const Var& v);

  const Poly& num() const { return num_; }
  const std::vector<DenFactor>& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_polynomial() const { return den_.empty(); }
  bool is_constant() const { return den_.empty() && num_.is_constant(); }
  Rational constant_value() const { return num_.constant_value(); }

  RatFunc operator+(const RatFunc& o) const;
  RatFunc operator-(const RatFunc& o) const;
  RatFunc operator-() const;
  RatFunc operator*(const RatFunc& o) const;
  RatFunc operator/(const RatFunc& o) const;
  RatFunc inverse() const;
  RatFunc pow(int k) const;

  /// Denominator expanded to a polynomial.
  Poly den_poly() const;

  friend bool operator==(const RatFunc& a, const RatFunc& b);

 private:
  void cancel();

  Poly num_;
  std::vector<DenFactor> den_;
};

int compare_ratfuncs(const RatFunc& a, const RatFunc& b);

}  // namespace lbjet
