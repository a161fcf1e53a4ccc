#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "lbjet/expo2_check.hpp"
#include "lbjet/flow_engine.hpp"
#include "random_fields.hpp"

using namespace lbjet;
using fx::y;

namespace {

Expr l() { return leaf(); }
Expr half(const Expr& e) { return e * Expr(Rational(1, 2)); }
bool zero(const Expr& e) { return is_zero(e) == ZeroStatus::ProvablyZero; }

Expr random_profile(SampleRng& rng) {
  Expr e;
  for (int d = 0; d <= 3; ++d) e += Expr(random_rational(rng, 5, 3)) * l().pow(d);
  return e;
}

void expect_exponentiable_shape(const LBField& f) {
  auto s = structure_matrices(f);
  auto c = theorem6_conditions(f, s);
  EXPECT_TRUE(c[0].passed()) << c[0].witness;
  EXPECT_TRUE(c[1].passed()) << c[1].witness;
  EXPECT_TRUE(nilpotency_check(s, make_point(0, 0, 0, 1, 2)).square_zero.passed());
}

}  // namespace

TEST(Antiderivative, LaurentPolynomials) {
  Var v = leaf_var();
  EXPECT_EQ(antiderivative(Expr(3) * l().pow(2) + Expr(1), v), l().pow(3) + l());
  EXPECT_EQ(antiderivative(Expr(1) / l(), v), ln(l()));
  EXPECT_EQ(antiderivative(Expr(1) / l().pow(3), v), Expr(Rational(-1, 2)) / l().pow(2));
  EXPECT_EQ(antiderivative(Expr::symbol("t") * l(), v), half(Expr::symbol("t") * l().pow(2)));
}

TEST(Antiderivative, UnsupportedIntegrands) {
  Var v = leaf_var();
  EXPECT_THROW(antiderivative(Expr(1) / (Expr(1) + l()), v), QuadratureError);
  EXPECT_THROW(antiderivative(sin(l()), v), QuadratureError);
}

TEST(Antiderivative, DifferentiatesBack) {
  SampleRng rng(12);
  for (int trial = 0; trial < 20; ++trial) {
    Expr e = random_profile(rng) + Expr(random_rational(rng, 5, 3)) / l().pow(static_cast<int>(uniform_int(rng, 1, 3)));
    EXPECT_TRUE(zero(diff(antiderivative(e, leaf_var()), leaf_var()) - e));
  }
}

TEST(Radial, QuadraticProfile) {
  auto r = build_radial(half(l().pow(2)), Expr(0));
  Expr z = y(2, 1) / y(1, 1);
  EXPECT_EQ(r.field.eta0[0], z);
  EXPECT_EQ(r.field.eta0[1], half(z.pow(2)));
  EXPECT_TRUE(r.field.xi[0].is_structurally_zero());
  EXPECT_TRUE(r.ode_residual.is_structurally_zero());
}

TEST(Radial, PureXiFieldHasRankOneM) {
  auto r = build_radial(Expr(0), l());
  Expr z = y(2, 1) / y(1, 1);
  auto s = structure_matrices(r.field);
  for (int L = 1; L <= 2; ++L) {
    for (int q = 1; q <= 2; ++q) {
      EXPECT_TRUE(zero(s.M[L - 1][q - 1] + y(L, 1) * diff(z, Var::jet(q, MultiIndex{1}))));
    }
  }
  EXPECT_TRUE(zero(s.M[0][0] * s.M[1][1] - s.M[0][1] * s.M[1][0]));
}

TEST(Radial, ZeroData) {
  auto r = build_radial(Expr(0), Expr(0));
  EXPECT_TRUE(r.field.xi[0].is_structurally_zero());
  EXPECT_TRUE(r.field.eta0[0].is_structurally_zero());
  EXPECT_TRUE(r.field.eta0[1].is_structurally_zero());
}

TEST(Affine, CorrectedExample) {
  auto r = build_affine(1, half(l().pow(2)), l());
  Expr lam = y(2, 1) / (Expr(1) + y(1, 1));
  EXPECT_EQ(r.f2, l().pow(2));
  EXPECT_EQ(r.field.eta0[0], lam);
  EXPECT_EQ(r.field.eta0[1], lam.pow(2));
  EXPECT_EQ(r.field.xi[0], lam);
  EXPECT_TRUE(r.ode_residual.is_structurally_zero());
  expect_exponentiable_shape(r.field);
}

TEST(Affine, PrintedVariantMissesTheOde) {
  auto r = build_affine_printed(1, half(l().pow(2)), l());
  EXPECT_EQ(r.ode_residual, Expr(1) - l());
  auto s = structure_matrices(r.field);
  auto c = theorem6_conditions(r.field, s);
  EXPECT_EQ(c[0].verdict, Verdict::Fail);
}

TEST(Affine, HorizontalLines) {
  auto r = build_affine(0, half(l().pow(2)), l().pow(2));
  EXPECT_EQ(r.spec.lambda, y(2, 1));
  EXPECT_EQ(r.f2, Expr(Rational(2, 3)) * l().pow(3));
  EXPECT_TRUE(r.ode_residual.is_structurally_zero());
}

TEST(Affine, NoXiProfile) {
  Rational g = Rational(3, 2);
  Expr F1 = l().pow(3);
  auto r = build_affine(g, F1, Expr(0));
  EXPECT_EQ(r.f2, Expr(g) * l() * diff(F1, leaf_var()) - Expr(g) * F1);
}

TEST(General, RadialDataByQuadrature) {
  FoliationSpec s;
  s.lambda = y(2, 1) / y(1, 1);
  s.slope = l();
  s.q0 = Expr(0);
  s.F1 = half(l().pow(2));
  s.g = l().pow(3);
  auto r = build_general(s);
  EXPECT_EQ(r.f2, half(l().pow(2)));
  EXPECT_TRUE(r.ode_residual.is_structurally_zero());
  expect_exponentiable_shape(r.field);
}

TEST(General, AffineDataMatchesAffineBuilder) {
  FoliationSpec s;
  s.lambda = y(2, 1) / (Expr(1) + Expr(2) * y(1, 1));
  s.slope = Expr(2) * l();
  s.q0 = l();
  s.F1 = l().pow(3);
  s.g = l().pow(2);
  auto a = build_general(s);
  auto b = build_affine(2, l().pow(3), l().pow(2));
  EXPECT_EQ(a.f2, b.f2);
  EXPECT_EQ(a.field.eta0[1], b.field.eta0[1]);
}

TEST(General, InconsistentLeavesAreRejected) {
  FoliationSpec s;
  s.lambda = y(2, 1) / y(1, 1);
  s.slope = Expr(2) * l();
  s.q0 = Expr(0);
  s.F1 = l();
  s.g = Expr(0);
  EXPECT_FALSE(check_foliation(s).entries[0].passed());
  EXPECT_THROW(build_general(s), PreconditionError);
}

TEST(General, UnsupportedQuadrature) {
  FoliationSpec s;
  s.lambda = y(2, 1) / y(1, 1);
  s.slope = l();
  s.q0 = Expr(0);
  s.F1 = ln(Expr(1) + l().pow(2));
  s.g = Expr(0);
  EXPECT_THROW(build_general(s), QuadratureError);
}

TEST(Foliation, RandomProfilesSatisfyContractionConditions) {
  SampleRng rng(31);
  for (int trial = 0; trial < 6; ++trial) {
    Expr F1 = random_profile(rng), g = random_profile(rng);
    auto rad = build_radial(F1, g);
    EXPECT_TRUE(rad.ode_residual.is_structurally_zero());
    expect_exponentiable_shape(rad.field);
    auto aff = build_affine(random_rational(rng, 4, 2), F1, g);
    EXPECT_TRUE(aff.ode_residual.is_structurally_zero());
    expect_exponentiable_shape(aff.field);
  }
}

TEST(Foliation, LeavesAreInvariantUnderTheFlow) {
  for (auto r : {build_radial(half(l().pow(2)), Expr(0)), build_radial(l().pow(3), l()),
                 build_affine(1, half(l().pow(2)), l())}) {
    auto h = h1_component(r.field);
    Expr moved = substitute(r.spec.lambda, {{Var::jet(1, MultiIndex{1}), h.h1[0]}, {Var::jet(2, MultiIndex{1}), h.h1[1]}});
    EXPECT_TRUE(zero(moved - r.spec.lambda)) << to_string(r.spec.family);
  }
}
