#include <gtest/gtest.h>

#include <cmath>

#include "fixtures.hpp"
#include "lbjet/jet_space.hpp"
#include "random_fields.hpp"

using namespace lbjet;
using fx::y;

namespace {

Expr y2d(int l, int a, int b) { return Expr::jet(l, MultiIndex{a, b}); }

bool zero(const Expr& e) { return is_zero(e) == ZeroStatus::ProvablyZero; }

LBField random_field(SampleRng& rng, int m) {
  auto vars = gen::small_vars(m, 1);
  std::vector<Expr> eta;
  for (int l = 0; l < m; ++l) eta.push_back(gen::random_poly(rng, vars, 3, 2));
  return LBField::make(1, m, {gen::random_poly(rng, vars, 2, 2)}, eta);
}

}  // namespace

TEST(TotalDerivative, JetCoordinate) { EXPECT_EQ(total_derivative(y(1, 0), 1), y(1, 1)); }

TEST(TotalDerivative, BaseCoordinate) { EXPECT_EQ(total_derivative(Expr::base(1), 1), Expr(1)); }

TEST(TotalDerivative, ProductOfFirstJets) {
  EXPECT_EQ(total_derivative(y(1, 1) * y(2, 1), 1), y(1, 2) * y(2, 1) + y(1, 1) * y(2, 2));
}

TEST(TotalDerivative, MultiIndexIterates) {
  EXPECT_EQ(total_derivative_multi(y(1, 0), MultiIndex{2}), y(1, 2));
  EXPECT_EQ(total_derivative_multi(y2d(1, 0, 0), MultiIndex{1, 1}), y2d(1, 1, 1));
}

TEST(TotalDerivative, DirectionsCommuteOnRandomPolynomials) {
  SampleRng rng(7);
  std::vector<Var> vars{Var::base(1), Var::base(2), Var::jet(1, MultiIndex{0, 0}), Var::jet(1, MultiIndex{1, 0}),
                        Var::jet(2, MultiIndex{0, 1}), Var::jet(2, MultiIndex{1, 1})};
  for (int trial = 0; trial < 30; ++trial) {
    Expr e = gen::random_poly(rng, vars, 4, 3);
    Expr c = total_derivative(total_derivative(e, 2), 1) - total_derivative(total_derivative(e, 1), 2);
    EXPECT_TRUE(c.is_structurally_zero()) << e.to_string();
  }
}

TEST(TotalDerivative, PullbackAlongGraph) {
  // D(F) o tau f = d/dx (F o tau f) for f = (sin x, x^3 + x).
  Var x = Var::base(1);
  std::vector<Expr> f{sin(Expr::base(1)), Expr::base(1).pow(3) + Expr::base(1)};
  auto tau = [&](int order) {
    std::map<Var, Expr> b;
    for (int l = 1; l <= 2; ++l) {
      Expr d = f[l - 1];
      for (int k = 0; k <= order; ++k) {
        b[Var::jet(l, MultiIndex{k})] = d;
        d = diff(d, x);
      }
    }
    return b;
  };
  SampleRng rng(3);
  auto vars = gen::small_vars(2, 2);
  for (int trial = 0; trial < 20; ++trial) {
    Expr F = gen::random_expr(rng, vars, false);
    Expr lhs = substitute(total_derivative(F, 1), tau(3));
    Expr rhs = diff(substitute(F, tau(3)), x);
    for (int s = 0; s < 5; ++s) {
      double xv = uniform(rng, -1.5, 1.5);
      try {
        double a = eval_double(lhs, {{x, xv}}), b = eval_double(rhs, {{x, xv}});
        EXPECT_NEAR(a, b, 1e-8 * std::max(1.0, std::fabs(b)));
      } catch (const EvalError&) {
      }
    }
  }
}

TEST(ProlongSet, OneRoundInOneDimension) {
  MultiPairSet a(1, 1);
  auto p = prolong_set(a, 1);
  EXPECT_EQ(p.size(), 2u);
  EXPECT_TRUE(p.contains(MultiPair{1, MultiIndex{1}}));
}

TEST(ProlongSet, TwoRoundsInTwoDimensions) {
  MultiPairSet a(2, 1);
  auto p = prolong_set(a, 2);
  EXPECT_EQ(p.size(), 6u);
  for (const auto& al : multi_indices_up_to(2, 2)) EXPECT_TRUE(p.contains(MultiPair{1, al}));
}

TEST(ProlongSet, ZeroRoundsIsIdentity) {
  MultiPairSet a(1, 2);
  a.insert(MultiPair{2, MultiIndex{3}});
  auto p = prolong_set(a, 0);
  EXPECT_EQ(p.size(), a.size());
}

TEST(ProlongSet, SizeGrowsByOnePerRound) {
  for (int l = 0; l < 6; ++l) EXPECT_EQ(prolong_set(MultiPairSet(1, 1), l).size(), 1u + l);
}

TEST(Epsilon0, Examples) {
  EXPECT_EQ(epsilon0(fx::translation())[0], -y(1, 1));
  EXPECT_EQ(epsilon0(LBField::make(1, 1, {Expr(0)}, {y(1, 1)}))[0], y(1, 1));
  auto f = LBField::make(1, 2, {y(1, 1)}, {y(2, 1), Expr(0)});
  EXPECT_EQ(epsilon0(f)[0], y(2, 1) - y(1, 1) * y(1, 1));
}

TEST(Prolong, TranslationField) {
  auto p = prolong(fx::translation(), 1);
  EXPECT_TRUE(p.eta_at(1, MultiIndex{1}).is_structurally_zero());
  EXPECT_EQ(p.eps_at(1, MultiIndex{1}), -y(1, 2));
}

TEST(Prolong, EvolutionaryFieldShiftsOrders) {
  auto p = prolong(LBField::make(1, 1, {Expr(0)}, {y(1, 2)}), 4);
  for (int k = 0; k <= 4; ++k) {
    EXPECT_EQ(p.eta_at(1, MultiIndex{k}), y(1, k + 2));
    EXPECT_EQ(p.eps_at(1, MultiIndex{k}), total_derivative_multi(y(1, 2), MultiIndex{k}));
  }
}

TEST(Prolong, SymmetrizedExample) {
  auto p = prolong(fx::symmetrized(1), 4);
  for (int k = 0; k <= 4; ++k) {
    for (int l = 1; l <= 2; ++l) EXPECT_EQ(p.eps_at(l, MultiIndex{k}), y(1, k + 2) - y(2, k + 2));
  }
  EXPECT_TRUE(verify_lb_identity(prolong(fx::symmetrized(1), 3)).passed());
}

TEST(Prolong, OrderZeroKeepsPrincipalComponents) {
  auto f = fx::radial();
  auto p = prolong(f, 0);
  EXPECT_EQ(p.eta_at(1, MultiIndex{0}), f.eta0[0]);
}

TEST(LBIdentity, InjectedDefectIsLocalized) {
  auto p = prolong(fx::translation(), 2);
  p.eps[MultiPair{1, MultiIndex{1}}] += Expr(1);
  auto e = verify_lb_identity(p);
  EXPECT_EQ(e.verdict, Verdict::Fail);
  EXPECT_EQ(e.witness, "L=1 alpha=(0) i=1");
}

TEST(LBIdentity, HoldsOnRandomFields) {
  SampleRng rng(11);
  for (int trial = 0; trial < 8; ++trial) {
    auto f = random_field(rng, 1 + trial % 2);
    auto p = prolong(f, 3);
    EXPECT_TRUE(verify_lb_identity(p).passed());
    // Same data through the two formulas: eps^a = D^a eps0 when xi = 0.
    auto g = LBField::make(1, f.m, {Expr(0)}, f.eta0);
    auto pg = prolong(g, 3);
    for (int l = 1; l <= f.m; ++l) {
      EXPECT_TRUE(zero(pg.eps_at(l, MultiIndex{3}) - total_derivative_multi(epsilon0(g)[l - 1], MultiIndex{3})));
    }
  }
}

TEST(LBIdentity, TwoDimensionalBase) {
  auto f = LBField::make(2, 1, {y2d(1, 1, 0), Expr::base(2)}, {y2d(1, 0, 1) * y2d(1, 0, 0)});
  auto p = prolong(f, 3);
  EXPECT_TRUE(verify_lb_identity(p).passed());
  EXPECT_TRUE(check_path_independence(p).passed());
}

TEST(LBField, RejectsOutOfSignature) {
  EXPECT_THROW(LBField::make(1, 1, {y(2, 0)}, {Expr(0)}), SignatureError);
  EXPECT_THROW(LBField::make(1, 1, {Expr(0)}, {Expr::symbol("t")}), SignatureError);
  EXPECT_THROW(LBField::make(1, 2, {Expr(0)}, {Expr(0)}), SignatureError);
  EXPECT_EQ(fx::radial().order(), 1);
}

TEST(CommutatorDefect, Translation) {
  EXPECT_TRUE(commutator_defect(prolong(fx::translation(), 3), 1).passed());
}

TEST(CommutatorDefect, EvolutionaryField) {
  auto p = prolong(LBField::make(1, 1, {Expr(0)}, {y(1, 1)}), 3);
  EXPECT_TRUE(commutator_defect(p, 1).passed());
}

TEST(CommutatorDefect, RandomFields) {
  SampleRng rng(5);
  for (int trial = 0; trial < 5; ++trial) {
    auto f = random_field(rng, 2);
    auto p = prolong(f, 3);
    EXPECT_TRUE(commutator_defect(p, 1, {y(1, 1) * y(2, 0)}).passed());
  }
}

TEST(ApplyField, NeedsEnoughOrders) {
  auto p = prolong(fx::translation(), 1);
  EXPECT_THROW(apply_field(p, y(1, 2)), std::out_of_range);
}
