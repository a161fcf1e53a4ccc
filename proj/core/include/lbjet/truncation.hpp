#pragma once

#include <map>
#include <stdexcept>
#include <vector>

#include "lbjet/lb_field.hpp"

namespace lbjet {

class NonPolynomialError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Every coordinate of J^k: x_1..x_n, then y^a_L for |a| <= k.
std::vector<Var> jet_coordinates(std::size_t n, int m, int k);

/// A vector field on J^k. Missing coordinates have coefficient zero.
struct FiniteField {
  std::size_t n = 1;
  int m = 1;
  int k = 0;
  std::map<Var, Expr> coef;

  Expr at(const Var& v) const;
  /// Directional derivative of g along the field.
  Expr apply(const Expr& g) const;
  bool is_structurally_zero() const;
  std::string to_string() const;
};

/// Coefficientwise a(b_v) - b(a_v).
FiniteField lie_bracket(const FiniteField& a, const FiniteField& b);

/// Multipairs (M, b) such that some principal component depends on y^b_M,
/// plus the mandatory (L, 0). Inconclusive zero tests count as dependence.
MultiPairSet dependency_set(const LBField& f, const ZeroTestOptions& opts = {});

/// Monomial in jets of order > k, as (variable, exponent) pairs sorted by variable.
using JetMonomial = std::vector<std::pair<Var, int>>;

Expr to_expr(const JetMonomial& mono);
std::string to_string(const JetMonomial& mono);

struct SplitEntry {
  Expr grade_zero;
  /// One coefficient per enumerated monomial (zero where absent).
  std::vector<Expr> coeffs;
};

/// eta^a_L = sum_l c_l(a, L) * mono_l + grade_zero(a, L), for |a| <= k, with
/// monomials in jets of order > k and everything else over J^k.
struct PolynomialSplit {
  int k = 0;
  std::vector<JetMonomial> monomials;
  std::map<MultiPair, SplitEntry> entries;

  std::size_t nu() const { return monomials.size(); }
};

/// Requires k >= |B| and a prolongation of order >= k. Throws
/// NonPolynomialError if some component is not polynomial in the high jets.
PolynomialSplit split(const LBField& f, const ProlongedField& p, int k);

/// Recombination residual of every entry.
CheckEntry verify_split(const ProlongedField& p, const PolynomialSplit& s, const ZeroTestOptions& opts = {});

/// X^(k): xi_i on d/dx_i and the grade-zero parts on d/dy^a_L.
FiniteField build_Xk(const ProlongedField& p, const PolynomialSplit& s);

/// Y^(k)_l for l = 1..nu(k): the coefficients of the l-th monomial.
std::vector<FiniteField> build_Yk(const ProlongedField& p, const PolynomialSplit& s);

}  // namespace lbjet
