#include "lbjet/foliation.hpp"

namespace lbjet {

Var leaf_var() { return Var::symbol("l"); }
Expr leaf() { return Expr::var(leaf_var()); }

namespace {

Expr y1(int l) { return Expr::jet1(l, 1); }

bool mentions(const Expr& e, const Var& v) { return free_vars(e).count(v) != 0; }

}  // namespace

Expr antiderivative(const Expr& e, const Var& v) {
  const RatFunc& rf = e.rf();
  AtomPtr va = make_var_atom(v);
  int den_exp = 0;
  if (!rf.is_polynomial()) {
    const auto& den = rf.den();
    Poly vp{Monomial(va)};
    if (den.size() != 1 || !(den[0].poly == vp)) {
      throw QuadratureError("integrand is not a Laurent polynomial in " + v.to_string() + ": " + e.to_string());
    }
    den_exp = den[0].exp;
  }
  Expr out(0);
  for (const auto& term : rf.num().terms()) {
    int k = 0;
    Monomial rest = term.mono.without(*va, &k);
    Expr coef(RatFunc(Poly(rest, term.coef)));
    if (mentions(coef, v)) {
      throw QuadratureError("integrand has a non-polynomial dependence on " + v.to_string() + ": " + e.to_string());
    }
    int p = k - den_exp;
    Expr x = Expr::var(v);
    if (p == -1) {
      out += coef * ln(x);
    } else {
      Rational c(1, p + 1);
      c.canonicalize();
      out += coef * x.pow(p + 1) * Expr(c);
    }
  }
  return out;
}

const char* to_string(FoliationFamily f) {
  switch (f) {
    case FoliationFamily::General: return "general";
    case FoliationFamily::Radial: return "radial";
    case FoliationFamily::Affine: return "affine";
  }
  return "?";
}

Expr on_leaves(const Expr& profile, const Expr& lambda) { return substitute(profile, {{leaf_var(), lambda}}); }

CheckReport check_foliation(const FoliationSpec& s, const ZeroTestOptions& zt) {
  CheckReport r;
  for (const auto& v : free_vars(s.lambda)) {
    if (!(v.is_jet() && v.jet_order() == 1 && v.alpha.dim() == 1 && v.index <= 2)) {
      throw SignatureError("leaf coordinate must be a function of y^1_1, y^1_2; found " + v.to_string());
    }
  }
  Expr m_on = on_leaves(s.slope, s.lambda);
  ZeroTally tangency("leaf_tangency", zt);
  tangency.expect_zero(diff(s.lambda, Var::jet(1, MultiIndex{1})) + m_on * diff(s.lambda, Var::jet(2, MultiIndex{1})),
                       "grad(lambda).(1,m)");
  r.add(tangency.take());
  ZeroTally q0("q0_on_leaves", zt);
  q0.expect_zero(y1(2) - m_on * y1(1) - on_leaves(s.q0, s.lambda), "y1_2 - m y1_1 - q0");
  r.add(q0.take());
  return r;
}

namespace {

Expr d_l(const Expr& e) { return diff(e, leaf_var()); }

FoliationField assemble(const FoliationSpec& s, Expr f1, Expr f2) {
  FoliationField out;
  out.spec = s;
  out.f1 = std::move(f1);
  out.f2 = std::move(f2);
  out.g = s.g;
  out.ode_residual = d_l(out.f2) - s.slope * d_l(out.f1) - s.q0 * d_l(s.g);
  out.field = LBField::make(1, 2, {on_leaves(s.g, s.lambda)},
                            {on_leaves(out.f1, s.lambda), on_leaves(out.f2, s.lambda)});
  return out;
}

void require_profile(const Expr& e, const char* what) {
  for (const auto& v : free_vars(e)) {
    if (!(v == leaf_var())) throw SignatureError(std::string(what) + " must be a function of l only; found " + v.to_string());
  }
}

FoliationSpec affine_spec(const Rational& gamma, const Expr& F1, const Expr& g) {
  FoliationSpec s;
  s.family = FoliationFamily::Affine;
  s.gamma = gamma;
  s.lambda = y1(2) / (Expr(1) + Expr(gamma) * y1(1));
  s.slope = Expr(gamma) * leaf();
  s.q0 = leaf();
  s.F1 = F1;
  s.g = g;
  return s;
}

}  // namespace

FoliationField build_general(const FoliationSpec& s, const ZeroTestOptions& zt) {
  require_profile(s.slope, "slope");
  require_profile(s.q0, "q0");
  require_profile(s.F1, "F1");
  require_profile(s.g, "g");
  CheckReport fol = check_foliation(s, zt);
  for (const auto& e : fol.entries) {
    if (!e.passed()) throw PreconditionError("foliation check " + e.name + " is " + to_string(e.verdict));
  }
  Expr f1 = d_l(s.F1);
  Expr f2 = antiderivative(s.slope * d_l(f1) + s.q0 * d_l(s.g), leaf_var());
  return assemble(s, f1, f2);
}

FoliationField build_radial(const Expr& F1, const Expr& g) {
  require_profile(F1, "F1");
  require_profile(g, "g");
  FoliationSpec s;
  s.family = FoliationFamily::Radial;
  s.lambda = y1(2) / y1(1);
  s.slope = leaf();
  s.q0 = Expr(0);
  s.F1 = F1;
  s.g = g;
  Expr f1 = d_l(F1);
  return assemble(s, f1, leaf() * f1 - F1);
}

FoliationField build_affine(const Rational& gamma, const Expr& F1, const Expr& g) {
  require_profile(F1, "F1");
  require_profile(g, "g");
  FoliationSpec s = affine_spec(gamma, F1, g);
  Expr f1 = d_l(F1);
  Expr G = antiderivative(leaf() * d_l(g), leaf_var());
  FoliationField out = assemble(s, f1, Expr(gamma) * leaf() * f1 - Expr(gamma) * F1 + G);
  out.notes.push_back("f2 uses G with G' = l g' in place of the printed + g term");
  return out;
}

FoliationField build_affine_printed(const Rational& gamma, const Expr& F1, const Expr& g) {
  require_profile(F1, "F1");
  require_profile(g, "g");
  FoliationSpec s = affine_spec(gamma, F1, g);
  Expr f1 = d_l(F1);
  FoliationField out = assemble(s, f1, Expr(gamma) * leaf() * f1 - Expr(gamma) * F1 + g);
  out.notes.push_back("printed variant: f2 = gamma l F1' - gamma F1 + g");
  return out;
}

}  // namespace lbjet
