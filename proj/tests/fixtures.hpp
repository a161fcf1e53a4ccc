#pragma once

// Fields that recur across test files.

#include "lbjet/foliation.hpp"
#include "lbjet/lb_field.hpp"
#include "lbjet/parser.hpp"

namespace lbjet::fx {

inline Expr y(int l, int k) { return Expr::jet1(l, k); }

inline Expr P(const std::string& s, std::size_t n = 1, int m = 2) { return parse(s, Signature{n, m, {"t", "l", "s"}}); }

inline LBField translation() { return LBField::make(1, 1, {Expr(1)}, {Expr(0)}); }

// Symmetrized field: both components move by scale * t * (y1'' - y2'').
inline LBField symmetrized(const Rational& scale = Rational(1, 2)) {
  Expr e = Expr(scale) * (y(1, 2) - y(2, 2));
  return LBField::make(1, 2, {Expr(0)}, {e, e});
}

inline LBField radial() { return build_radial(leaf().pow(2) * Expr(Rational(1, 2)), Expr(0)).field; }

inline LBField affine() { return build_affine(1, leaf().pow(2) * Expr(Rational(1, 2)), leaf()).field; }

inline LBField square_field() { return LBField::make(1, 2, {Expr(0)}, {y(1, 1).pow(2), Expr(0)}); }

}  // namespace lbjet::fx
