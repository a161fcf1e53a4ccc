#include <gtest/gtest.h>

#include <functional>

#include "fixtures.hpp"
#include "lbjet/classifier.hpp"
#include "random_fields.hpp"

using namespace lbjet;
using fx::y;

namespace {

DepEdge edge(int from, int to, int order) { return DepEdge{from, to, MultiIndex{order}, false}; }

// Brute force: enumerate simple cycles by DFS from each start vertex.
bool has_bad_cycle(const DepGraph& g) {
  bool bad = false;
  std::vector<bool> on(g.m + 1, false);
  std::function<void(int, int, bool)> dfs = [&](int start, int v, bool labeled) {
    for (const auto& e : g.edges) {
      if (e.from != v) continue;
      bool lab = labeled || e.alpha.order() != 0;
      if (e.to == start) {
        if (lab) bad = true;
      } else if (e.to > start && !on[e.to]) {
        on[e.to] = true;
        dfs(start, e.to, lab);
        on[e.to] = false;
      }
    }
  };
  for (int s = 1; s <= g.m; ++s) {
    on[s] = true;
    dfs(s, s, false);
    on[s] = false;
  }
  return bad;
}

}  // namespace

TEST(DependencyGraph, SingleArrow) {
  auto g = dependency_graph({y(2, 2), Expr(0)});
  ASSERT_EQ(g.edges.size(), 1u);
  EXPECT_EQ(g.edges[0].from, 2);
  EXPECT_EQ(g.edges[0].to, 1);
  EXPECT_EQ(g.edges[0].alpha, MultiIndex{2});
}

TEST(DependencyGraph, SymmetrizedHasTwoArrows) {
  Expr e = y(1, 2) - y(2, 2);
  auto g = dependency_graph({e, e});
  EXPECT_EQ(g.edges.size(), 2u);
  EXPECT_EQ(check_cycle_condition(g).verdict, Verdict::Fail);
}

TEST(DependencyGraph, OwnComponentsOnly) {
  auto g = dependency_graph({y(1, 3) * y(1, 0), sin(y(2, 1))});
  EXPECT_TRUE(g.edges.empty());
}

TEST(DependencyGraph, InconclusiveArrowIsFlagged) {
  Expr e = (sin(Expr::base(1)).pow(2) + cos(Expr::base(1)).pow(2) - Expr(1)) * y(2, 1);
  auto g = dependency_graph({e, Expr(0)});
  ASSERT_EQ(g.edges.size(), 1u);
  EXPECT_TRUE(g.edges[0].flagged);
}

TEST(CycleCondition, Examples) {
  EXPECT_TRUE(check_cycle_condition(DepGraph{2, {edge(2, 1, 2)}}).passed());
  EXPECT_FALSE(check_cycle_condition(DepGraph{2, {edge(1, 2, 2), edge(2, 1, 2)}}).passed());
  EXPECT_TRUE(check_cycle_condition(DepGraph{2, {edge(1, 2, 0), edge(2, 1, 0)}}).passed());
}

TEST(CycleCondition, AgreesWithBruteForce) {
  SampleRng rng(99);
  for (int trial = 0; trial < 300; ++trial) {
    DepGraph g;
    g.m = static_cast<int>(uniform_int(rng, 1, 6));
    int ne = static_cast<int>(uniform_int(rng, 0, 12));
    for (int i = 0; i < ne && g.m > 1; ++i) {
      int a = static_cast<int>(uniform_int(rng, 1, g.m)), b = static_cast<int>(uniform_int(rng, 1, g.m));
      if (a == b) continue;
      g.edges.push_back(edge(a, b, uniform_int(rng, 0, 3) == 0 ? 1 : 0));
    }
    EXPECT_EQ(check_cycle_condition(g).passed(), !has_bad_cycle(g)) << trial;
  }
}

TEST(ConverseCriterion, SingleArrowPasses) {
  auto r = check_theorem2(1, {y(2, 2), Expr(0)});
  EXPECT_TRUE(r.entry.passed());
  ASSERT_TRUE(r.field.has_value());
  EXPECT_TRUE(r.field->xi[0].is_structurally_zero());
}

TEST(ConverseCriterion, SymmetrizedFailsCycleCondition) {
  Expr e = y(1, 2) - y(2, 2);
  auto r = check_theorem2(1, {e, e});
  EXPECT_FALSE(r.entry.passed());
  EXPECT_TRUE(r.parts[0].passed());
  // Each component also depends on its own second jet.
  EXPECT_FALSE(r.parts[1].passed());
  EXPECT_FALSE(r.parts[2].passed());
  EXPECT_FALSE(r.field.has_value());
}

TEST(ConverseCriterion, ScalarFirstOrderPasses) {
  auto r = check_theorem2(1, {Expr::base(1) * y(1, 1)});
  EXPECT_TRUE(r.entry.passed());
  ASSERT_TRUE(r.field.has_value());
  EXPECT_EQ(r.field->xi[0], -Expr::base(1));
}

TEST(ConverseCriterion, SecondOrderOwnDependenceFails) {
  auto r = check_theorem2(1, {y(1, 2)});
  EXPECT_FALSE(r.parts[1].passed());
}

TEST(ConverseCriterion, UnequalFirstOrderSlopesFail) {
  auto r = check_theorem2(1, {y(1, 1), Expr(0)});
  EXPECT_FALSE(r.parts[0].passed());
}

TEST(ConverseCriterion, InducedFieldSatisfiesIdentity) {
  SampleRng rng(4);
  std::vector<Var> low{Var::base(1)};
  for (int trial = 0; trial < 5; ++trial) {
    Expr c = gen::random_poly(rng, low, 2, 2);
    std::vector<Expr> phi{c * y(1, 1) + gen::random_poly(rng, low, 2, 2) + y(2, 2),
                          c * y(2, 1) + gen::random_poly(rng, low, 2, 2)};
    auto r = check_theorem2(1, phi);
    ASSERT_TRUE(r.entry.passed());
    auto eps = epsilon0(*r.field);
    for (int l = 0; l < 2; ++l) EXPECT_TRUE((eps[l] - phi[l]).is_structurally_zero());
    EXPECT_TRUE(verify_lb_identity(prolong(*r.field, 2)).passed());
  }
}

TEST(RecoverXi, ScalarExamples) {
  EXPECT_EQ(recover_xi(1, {-y(1, 1)})[0], Expr(1));
  EXPECT_EQ(recover_xi(1, {y(1, 1)})[0], Expr(-1));
}

TEST(RecoverXi, ConsistentPair) {
  auto f = LBField::make(1, 2, {y(1, 0) * Expr::base(1)}, {y(2, 1), Expr(0)});
  EXPECT_EQ(recover_xi(1, epsilon0(f))[0], y(1, 0) * Expr::base(1));
}

TEST(RecoverXi, DisagreementNamesTheComponents) {
  // The candidates are 2 y1' (L = 1) and y1' (L = 2).
  try {
    recover_xi(1, {-y(1, 1) * y(1, 1) + y(2, 1), -y(2, 1) * y(1, 1)});
    FAIL() << "expected inconsistency";
  } catch (const InconsistencyError& e) {
    EXPECT_EQ(e.direction(), 1);
    EXPECT_EQ(e.first(), 1);
    EXPECT_EQ(e.second(), 2);
  }
}

TEST(Footprint, TranslationStabilizes) {
  auto r = footprint_probe(fx::translation(), Var::base(1), 4);
  EXPECT_TRUE(r.stabilized);
  for (const auto& s : r.sets) {
    for (const auto& v : s) EXPECT_EQ(v, Var::base(1));
  }
}

TEST(Footprint, EvolutionaryFieldGrows) {
  auto r = footprint_probe(LBField::make(1, 1, {Expr(0)}, {y(1, 1)}), Var::jet(1, MultiIndex{0}), 4);
  ASSERT_EQ(r.sets.size(), 4u);
  for (int k = 1; k <= 4; ++k) EXPECT_EQ(r.sets[k - 1], std::set<Var>{Var::jet(1, MultiIndex{k})});
  EXPECT_FALSE(r.stabilized);
  EXPECT_EQ(r.max_order, 4);
}

TEST(Footprint, BudgetIsReported) {
  auto f = LBField::make(1, 1, {y(1, 1) * y(1, 0)}, {y(1, 1).pow(3) + y(1, 2) * y(1, 0)});
  auto r = footprint_probe(f, Var::jet(1, MultiIndex{0}), 8, 50);
  EXPECT_TRUE(r.budget_exceeded);
  EXPECT_LT(r.sets.size(), 8u);
}
