#include "lbjet/jet_space.hpp"

namespace lbjet {

Expr total_derivative(const Expr& e, int i) {
  static const Expr one(1), zero(0);
  return derive(e, [i](const Var& v) -> Expr {
    switch (v.kind) {
      case Var::Kind::Base:
        return v.index == i ? one : zero;
      case Var::Kind::Jet:
        return Expr::jet(v.index, v.alpha.raised(i));
      case Var::Kind::Symbol:
        break;
    }
    return zero;
  });
}

Expr total_derivative_multi(const Expr& e, const MultiIndex& alpha) {
  Expr r = e;
  for (std::size_t d = 0; d < alpha.dim(); ++d) {
    for (int k = 0; k < alpha[d]; ++k) r = total_derivative(r, static_cast<int>(d + 1));
  }
  return r;
}

}  // namespace lbjet
