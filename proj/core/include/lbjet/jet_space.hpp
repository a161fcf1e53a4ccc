#pragma once

#include "lbjet/expr.hpp"
#include "lbjet/multi_index.hpp"

namespace lbjet {

/// D^i e = de/dx_i + sum over the jets y^a_L occurring in e of y^{a+i}_L de/dy^a_L.
Expr total_derivative(const Expr& e, int i);

/// (D^1)^{a_1} ... (D^n)^{a_n} e.
Expr total_derivative_multi(const Expr& e, const MultiIndex& alpha);

}  // namespace lbjet
