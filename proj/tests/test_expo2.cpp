#include <gtest/gtest.h>

#include <algorithm>

#include "fixtures.hpp"
#include "lbjet/expo2_check.hpp"
#include "random_fields.hpp"

using namespace lbjet;
using fx::y;

namespace {

bool zero(const Expr& e) { return is_zero(e) == ZeroStatus::ProvablyZero; }

Rational at(const Expr& e, const JetPoint& p) {
  Valuation v(p.begin(), p.end());
  return eval(e, v).exact();
}

Mat2<Rational> R(int a, int b, int c, int d) { return Mat2<Rational>{{{a, b}, {c, d}}}; }

LBField constant_field() { return LBField::make(1, 2, {Expr(3)}, {Expr(1), Expr(-2)}); }

}  // namespace

TEST(StructureMatrices, RadialAtOneTwo) {
  auto s = structure_matrices(fx::radial());
  auto p = make_point(0, 0, 0, 1, 2);
  Mat2<Rational> expect = R(-2, 1, -4, 2);
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) EXPECT_EQ(at(s.M[i][j], p), expect[i][j]);
  }
}

TEST(StructureMatrices, TranslationVanishes) {
  auto s = structure_matrices(LBField::make(1, 2, {Expr(1)}, {Expr(0), Expr(0)}));
  for (int i = 0; i < 2; ++i) {
    EXPECT_TRUE(s.O[i].is_structurally_zero());
    for (int j = 0; j < 2; ++j) {
      EXPECT_TRUE(s.N[i][j].is_structurally_zero());
      EXPECT_TRUE(s.M[i][j].is_structurally_zero());
    }
  }
}

TEST(StructureMatrices, SquareField) {
  auto s = structure_matrices(fx::square_field());
  EXPECT_EQ(s.M[0][0], Expr(2) * y(1, 1));
  EXPECT_TRUE(s.M[0][1].is_structurally_zero());
  EXPECT_TRUE(s.M[1][0].is_structurally_zero());
  EXPECT_TRUE(s.M[1][1].is_structurally_zero());
}

TEST(StructureMatrices, RejectsSecondOrderComponents) {
  EXPECT_THROW(structure_matrices(fx::symmetrized()), SignatureError);
  EXPECT_THROW(structure_matrices(fx::translation()), SignatureError);
}

TEST(StructureMatrices, ClosedFormulaForQAgreesWithBracket) {
  SampleRng rng(8);
  std::vector<Var> vars{Var::base(1), Var::jet(1, MultiIndex{0}), Var::jet(2, MultiIndex{0}), Var::jet(1, MultiIndex{1}),
                        Var::jet(2, MultiIndex{1})};
  std::vector<LBField> fields{fx::radial(), fx::affine(), fx::square_field()};
  for (int i = 0; i < 6; ++i) {
    fields.push_back(LBField::make(1, 2, {gen::random_poly(rng, vars, 2, 2)},
                                   {gen::random_poly(rng, vars, 3, 2), gen::random_expr(rng, vars)}));
  }
  for (const auto& f : fields) EXPECT_TRUE(q_formula_crosscheck(structure_matrices(f)).passed());
}

TEST(StructureMatrices, FoliationMatricesHaveRankOne) {
  for (const auto& f : {fx::radial(), fx::affine()}) {
    auto s = structure_matrices(f);
    EXPECT_TRUE(zero(s.M[0][0] * s.M[1][1] - s.M[0][1] * s.M[1][0]));
  }
}

TEST(ContractionConditions, RadialContractionsVanish) {
  auto f = fx::radial();
  auto c = theorem6_conditions(f, structure_matrices(f));
  EXPECT_TRUE(c[0].passed());
  EXPECT_TRUE(c[1].passed());
  EXPECT_EQ(c[0].mode, ProofMode::Symbolic);
}

TEST(ContractionConditions, SquareFieldFailsFirstCondition) {
  auto f = fx::square_field();
  auto c = theorem6_conditions(f, structure_matrices(f));
  EXPECT_EQ(c[0].verdict, Verdict::Fail);
}

TEST(ContractionConditions, ConstantFieldIsVacuous) {
  auto f = constant_field();
  auto c = theorem6_conditions(f, structure_matrices(f));
  EXPECT_TRUE(c[0].passed());
  EXPECT_TRUE(c[1].passed());
}

TEST(Nilpotency, Radial) {
  auto r = nilpotency_check(structure_matrices(fx::radial()), make_point(0, 0, 0, 1, 2));
  EXPECT_TRUE(r.square_zero.passed());
  EXPECT_TRUE(r.nonzero_at.passed());
}

TEST(Nilpotency, ZeroMatrix) {
  auto r = nilpotency_check(structure_matrices(constant_field()), make_point(0, 0, 0, 1, 2));
  EXPECT_TRUE(r.square_zero.passed());
  EXPECT_FALSE(r.nonzero_at.passed());
}

TEST(Nilpotency, SquareFieldHasWitness) {
  auto r = nilpotency_check(structure_matrices(fx::square_field()), make_point(0, 0, 0, 1, 2));
  EXPECT_EQ(r.square_zero.verdict, Verdict::Fail);
  EXPECT_FALSE(r.square_zero.witness.empty());
  EXPECT_EQ(r.M2[0][0], Expr(4) * y(1, 1).pow(2));
}

TEST(FactorB, LowerTriangular) {
  auto B = factor_B(R(2, 0, 3, 0), R(0, 0, 1, 0));
  EXPECT_EQ(B, R(0, 2, 0, 3));
}

TEST(FactorB, ZeroA) { EXPECT_EQ(factor_B(R(0, 0, 0, 0), R(-2, 1, -4, 2)), R(0, 0, 0, 0)); }

TEST(FactorB, AEqualsM) {
  auto M = R(-2, 1, -4, 2);
  auto B = factor_B(M, M);
  EXPECT_EQ(mat_mul(B, M), M);
}

TEST(FactorB, HypothesesAreNamed) {
  try {
    factor_B(R(1, 0, 0, 0), R(1, 0, 0, 0));
    FAIL();
  } catch (const FactorError& e) {
    EXPECT_EQ(e.hypothesis(), "M^2 = 0");
  }
  try {
    factor_B(R(1, 0, 0, 0), R(0, 0, 0, 0));
    FAIL();
  } catch (const FactorError& e) {
    EXPECT_EQ(e.hypothesis(), "M != 0");
  }
  try {
    factor_B(R(0, 1, 0, 0), R(0, 0, 1, 0));
    FAIL();
  } catch (const FactorError& e) {
    EXPECT_EQ(e.hypothesis(), "A M = 0");
  }
}

TEST(FactorB, RandomRankOneInstances) {
  SampleRng rng(2024);
  for (int trial = 0; trial < 200; ++trial) {
    Rational a = random_rational(rng, 20, 5), b = random_rational(rng, 20, 5), c = random_rational(rng, 20, 5);
    if (a == 0 && b == 0) continue;
    if (c == 0) c = 1;
    // M = u v^T with v orthogonal to u.
    Mat2<Rational> M{{{-a * b * c, a * a * c}, {-b * b * c, a * b * c}}};
    Mat2<Rational> B0;
    for (auto& row : B0) {
      for (auto& v : row) v = random_rational(rng, 20, 5);
    }
    auto A = mat_mul(B0, M);
    auto B = factor_B(A, M);
    EXPECT_EQ(mat_mul(B, M), A);
  }
}

TEST(FactorB, SymbolicEntries) {
  auto M = structure_matrices(fx::radial()).M;
  Mat2<Expr> B0{{{y(1, 0), Expr(2)}, {Expr::base(1), y(2, 1)}}};
  auto A = mat_mul(B0, M);
  auto B = factor_B(A, M);
  auto D = mat_mul(B, M);
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) EXPECT_TRUE(zero(D[i][j] - A[i][j]));
  }
}

TEST(ModuleClosure, FoliationFamilies) {
  for (const auto& f : {fx::radial(), fx::affine()}) {
    auto r = module_closure(f, structure_matrices(f));
    EXPECT_TRUE(r.entry.passed()) << r.entry.witness;
    EXPECT_TRUE(r.A.has_value());
    EXPECT_NE(std::find(r.entry.details.begin(), r.entry.details.end(), "factored exactly at 20 rational points"),
              r.entry.details.end());
  }
}

TEST(ModuleClosure, VacuousWithoutAuxiliaryFields) {
  auto f = LBField::make(1, 2, {Expr(1)}, {Expr(0), Expr(0)});
  auto r = module_closure(f, structure_matrices(f));
  EXPECT_TRUE(r.entry.passed());
}

TEST(ModuleClosure, RefusesRejectedField) {
  auto f = fx::square_field();
  EXPECT_THROW(module_closure(f, structure_matrices(f)), PreconditionError);
}

TEST(Expo2Check, Verdicts) {
  auto p = make_point(0, 0, 0, 1, 2);
  EXPECT_EQ(expo2_check(fx::radial(), p).verdict, ExpoVerdict::ExponentiableAtPoint);
  // The affine M vanishes where y1_1 = 1 and y1_2 = 2 lambda, which includes (1, 2).
  EXPECT_EQ(expo2_check(fx::affine(), p).verdict, ExpoVerdict::Inconclusive);
  EXPECT_EQ(expo2_check(fx::affine(), make_point(0, 0, 0, 2, 1)).verdict, ExpoVerdict::ExponentiableAtPoint);
  EXPECT_EQ(expo2_check(fx::square_field(), p).verdict, ExpoVerdict::Rejected);
  EXPECT_EQ(expo2_check(constant_field(), p).verdict, ExpoVerdict::Inconclusive);
}
