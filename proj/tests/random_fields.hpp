#pragma once

// Random generators shared by the property tests.

#include <vector>

#include "lbjet/expr.hpp"
#include "lbjet/sampling.hpp"

namespace lbjet::gen {

// Variables used by random expressions for n = 1.
inline std::vector<Var> small_vars(int m, int max_order) {
  std::vector<Var> vs{Var::base(1)};
  for (int l = 1; l <= m; ++l) {
    for (int k = 0; k <= max_order; ++k) vs.push_back(Var::jet(l, MultiIndex{k}));
  }
  return vs;
}

inline Expr random_monomial(SampleRng& rng, const std::vector<Var>& vars, int max_deg) {
  Expr e(static_cast<int>(uniform_int(rng, -5, 5)));
  if (e.is_structurally_zero()) e = Expr(1);
  int deg = static_cast<int>(uniform_int(rng, 0, max_deg));
  for (int d = 0; d < deg; ++d) e *= Expr::var(vars[uniform_int(rng, 0, vars.size() - 1)]);
  return e;
}

inline Expr random_poly(SampleRng& rng, const std::vector<Var>& vars, int terms, int max_deg) {
  Expr e;
  for (int i = 0; i < terms; ++i) e += random_monomial(rng, vars, max_deg);
  return e;
}

// Random rational function, optionally wrapped in an elementary function.
inline Expr random_expr(SampleRng& rng, const std::vector<Var>& vars, bool allow_functions = true) {
  Expr p = random_poly(rng, vars, 3, 2);
  int shape = static_cast<int>(uniform_int(rng, 0, allow_functions ? 4 : 2));
  switch (shape) {
    case 0:
      return p;
    case 1:
      return p / (Expr(1) + Expr::var(vars[uniform_int(rng, 0, vars.size() - 1)]).pow(2));
    case 2:
      return p * random_poly(rng, vars, 2, 1);
    case 3:
      return p * sin(random_poly(rng, vars, 2, 1));
    default:
      return p + exp(random_monomial(rng, vars, 1));
  }
}

}  // namespace lbjet::gen
