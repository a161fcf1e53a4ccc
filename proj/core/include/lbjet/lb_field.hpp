#pragma once

#include <map>
#include <stdexcept>
#include <vector>

#include "lbjet/expr.hpp"
#include "lbjet/multi_index.hpp"
#include "lbjet/report.hpp"

namespace lbjet {

class SignatureError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An LB field given by its principal components xi_i and eta0_L.
struct LBField {
  std::size_t n = 1;
  int m = 1;
  std::vector<Expr> xi;
  std::vector<Expr> eta0;

  /// Validates list lengths and that every variable lies in the (n, m) signature.
  static LBField make(std::size_t n, int m, std::vector<Expr> xi, std::vector<Expr> eta0);

  /// Highest jet order in the principal components, recomputed on each call (-1 if none).
  int order() const;
};

/// eta^alpha_L and eps^alpha_L for |alpha| <= order.
struct ProlongedField {
  std::size_t n = 1;
  int m = 1;
  int order = 0;
  std::vector<Expr> xi;
  std::map<MultiPair, Expr> eta;
  std::map<MultiPair, Expr> eps;

  const Expr& eta_at(int l, const MultiIndex& a) const { return eta.at(MultiPair{l, a}); }
  const Expr& eps_at(int l, const MultiIndex& a) const { return eps.at(MultiPair{l, a}); }
};

/// eps0_L = eta0_L - sum_i y^i_L xi_i.
std::vector<Expr> epsilon0(const LBField& f);

/// eta^{a+i}_L = D^i eta^a_L - sum_j y^{a+j}_L D^i xi_j, stepping along the
/// first nonzero direction of each multiindex; eps is derived from eta.
ProlongedField prolong(const LBField& f, int k);

/// eps^{a+i}_L - D^i eps^a_L is zero for all |a| < order.
CheckEntry verify_lb_identity(const ProlongedField& p, const ZeroTestOptions& opts = {});

/// For n > 1, recomputes each eta^a along every other admissible last step and
/// compares with the stored value.
CheckEntry check_path_independence(const ProlongedField& p, const ZeroTestOptions& opts = {});

/// X(g) using the prolonged components; g may not mention jets above p.order.
Expr apply_field(const ProlongedField& p, const Expr& g);

/// [D^i, X] g - sum_j (D^i xi_j) D^j g on every coordinate of order <= order-1
/// plus the given test functions (each of order <= order-1).
CheckEntry commutator_defect(const ProlongedField& p, int i, const std::vector<Expr>& tests = {},
                             const ZeroTestOptions& opts = {});

}  // namespace lbjet
