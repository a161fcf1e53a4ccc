#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "lbjet/lb_field.hpp"
#include "lbjet/report.hpp"

namespace lbjet {

/// The leaf parameter lambda, written `l` in expressions.
Var leaf_var();
Expr leaf();

/// The integrand has no antiderivative this module can write down.
class QuadratureError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Antiderivative in `v` of a Laurent polynomial in `v` whose coefficients do
/// not mention `v` (1/v integrates to ln(v)). Zero constant of integration.
Expr antiderivative(const Expr& e, const Var& v);

enum class FoliationFamily { General, Radial, Affine };

const char* to_string(FoliationFamily f);

/// A foliation of the (y^1_1, y^1_2) plane by lines. `lambda` is the leaf
/// coordinate over y^1; `slope`, `q0`, `F1`, `g` are expressions in l.
struct FoliationSpec {
  FoliationFamily family = FoliationFamily::General;
  Expr lambda;
  Expr slope;
  Expr q0;
  Expr F1;
  Expr g;
  Rational gamma = 0;
};

/// Leaf tangency grad(lambda).(1, m(lambda)) = 0 and q0(lambda) = y^1_2 - m(lambda) y^1_1.
CheckReport check_foliation(const FoliationSpec& s, const ZeroTestOptions& zt = {});

struct FoliationField {
  FoliationSpec spec;
  /// Profiles in l.
  Expr f1, f2, g;
  /// f2' - m f1' - q0 g' in l.
  Expr ode_residual;
  LBField field;
  std::vector<std::string> notes;
};

/// f1 = F1', f2 by quadrature of m f1' + q0 g'. Throws PreconditionError when
/// the foliation checks do not pass and QuadratureError when f2 cannot be integrated.
FoliationField build_general(const FoliationSpec& s, const ZeroTestOptions& zt = {});

/// z = y^1_2 / y^1_1, f1 = F1', f2 = z F1' - F1, xi = g(z).
FoliationField build_radial(const Expr& F1, const Expr& g);

/// lambda = y^1_2 / (1 + gamma y^1_1), f2 = gamma l F1' - gamma F1 + G with G' = l g'.
FoliationField build_affine(const Rational& gamma, const Expr& F1, const Expr& g);

/// Same family with the printed f2 = gamma l F1' - gamma F1 + g. Its ODE
/// residual is generally nonzero.
FoliationField build_affine_printed(const Rational& gamma, const Expr& F1, const Expr& g);

/// Substitutes the leaf coordinate for l.
Expr on_leaves(const Expr& profile, const Expr& lambda);

}  // namespace lbjet
