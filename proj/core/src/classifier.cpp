#include "lbjet/classifier.hpp"

#include <functional>

namespace lbjet {

DepGraph dependency_graph(const std::vector<Expr>& eps0, const ZeroTestOptions& opts) {
  DepGraph g;
  g.m = static_cast<int>(eps0.size());
  for (int l = 1; l <= g.m; ++l) {
    for (const auto& v : jet_vars(eps0[l - 1])) {
      if (v.index == l) continue;
      ZeroStatus z = is_zero(diff(eps0[l - 1], v), opts);
      if (z == ZeroStatus::ProvablyZero) continue;
      g.edges.push_back(DepEdge{v.index, l, v.alpha, z == ZeroStatus::Unknown});
    }
  }
  return g;
}

namespace {

bool is_zero_index(const MultiIndex& a) { return a.order() == 0; }

// Vertices on some path from `start` to `goal`, as a parent chain; empty when unreachable.
std::vector<int> find_path(const DepGraph& g, int start, int goal) {
  std::vector<int> parent(g.m + 1, 0);
  std::vector<int> queue{start};
  parent[start] = start;
  for (std::size_t q = 0; q < queue.size(); ++q) {
    int u = queue[q];
    if (u == goal) break;
    for (const auto& e : g.edges) {
      if (e.from == u && parent[e.to] == 0) {
        parent[e.to] = u;
        queue.push_back(e.to);
      }
    }
  }
  if (parent[goal] == 0) return {};
  std::vector<int> path{goal};
  while (path.back() != start) path.push_back(parent[path.back()]);
  std::reverse(path.begin(), path.end());
  return path;
}

}  // namespace

CheckEntry check_cycle_condition(const DepGraph& g) {
  CheckEntry c;
  c.name = "cycle_condition";
  for (const auto& e : g.edges) {
    if (e.flagged) c.mode = ProofMode::Sampled;
    if (is_zero_index(e.alpha)) continue;
    auto back = find_path(g, e.to, e.from);
    if (back.empty()) continue;
    std::string cycle = std::to_string(e.from) + " -" + e.alpha.to_string() + "-> " + std::to_string(back[0]);
    for (std::size_t i = 1; i < back.size(); ++i) cycle += " -> " + std::to_string(back[i]);
    if (c.verdict != Verdict::Fail) c.witness = cycle;
    c.verdict = Verdict::Fail;
    c.details.push_back("cycle through labelled arrow: " + cycle);
  }
  return c;
}

Theorem2Result check_theorem2(std::size_t n, const std::vector<Expr>& phi, const ZeroTestOptions& opts) {
  int m = static_cast<int>(phi.size());
  if (m < 1) throw PreconditionError("check_theorem2 needs at least one function");
  Theorem2Result r;

  ZeroTally t1("theorem2_i", opts);
  std::vector<Expr> xi;
  for (std::size_t i = 1; i <= n; ++i) {
    MultiIndex u = MultiIndex::unit(n, static_cast<int>(i));
    Expr d1 = diff(phi[0], Var::jet(1, u));
    xi.push_back(-d1);
    for (int l = 2; l <= m; ++l) {
      t1.expect_zero(diff(phi[l - 1], Var::jet(l, u)) - d1,
                     "i=" + std::to_string(i) + " L=1 vs L=" + std::to_string(l));
    }
  }
  r.parts.push_back(t1.take());

  ZeroTally t2("theorem2_ii", opts);
  for (int l = 1; l <= m; ++l) {
    for (const auto& v : jet_vars(phi[l - 1])) {
      if (v.index != l || v.jet_order() <= 1) continue;
      t2.expect_zero(diff(phi[l - 1], v), "L=" + std::to_string(l) + " " + v.to_string());
    }
  }
  r.parts.push_back(t2.take());

  CheckEntry t3 = check_cycle_condition(dependency_graph(phi, opts));
  t3.name = "theorem2_iii";
  r.parts.push_back(t3);

  r.entry.name = "theorem2";
  for (const auto& p : r.parts) {
    if (p.verdict == Verdict::Fail && r.entry.verdict != Verdict::Fail) {
      r.entry.verdict = Verdict::Fail;
      r.entry.witness = p.name + ": " + p.witness;
    } else if (p.verdict == Verdict::Unknown && r.entry.verdict == Verdict::Pass) {
      r.entry.verdict = Verdict::Unknown;
      r.entry.witness = p.name + ": " + p.witness;
    }
    if (p.mode == ProofMode::Sampled) r.entry.mode = ProofMode::Sampled;
    for (const auto& d : p.details) r.entry.details.push_back(p.name + ": " + d);
  }
  if (r.entry.verdict == Verdict::Pass) {
    std::vector<Expr> eta0;
    for (int l = 1; l <= m; ++l) {
      Expr e = phi[l - 1];
      for (std::size_t i = 1; i <= n; ++i) e += Expr::jet(l, MultiIndex::unit(n, static_cast<int>(i))) * xi[i - 1];
      eta0.push_back(e);
    }
    r.field = LBField::make(n, m, xi, eta0);
  }
  return r;
}

std::vector<Expr> recover_xi(std::size_t n, const std::vector<Expr>& eps0, const ZeroTestOptions& opts) {
  std::vector<Expr> xi;
  int m = static_cast<int>(eps0.size());
  for (std::size_t i = 1; i <= n; ++i) {
    MultiIndex u = MultiIndex::unit(n, static_cast<int>(i));
    Expr first = -diff(eps0[0], Var::jet(1, u));
    for (int l = 2; l <= m; ++l) {
      Expr other = -diff(eps0[l - 1], Var::jet(l, u));
      ZeroStatus z = is_zero(other - first, opts);
      if (z != ZeroStatus::ProvablyZero) {
        throw InconsistencyError(static_cast<int>(i), 1, l,
                                 first.to_string() + " vs " + other.to_string() + " (" + to_string(z) + ")");
      }
    }
    xi.push_back(first);
  }
  return xi;
}

FootprintReport footprint_probe(const LBField& f, const Var& g, int kmax, std::size_t node_budget) {
  if (kmax < 1) throw PreconditionError("footprint_probe needs kmax >= 1");
  FootprintReport r;
  r.g = g;
  ProlongedField p = prolong(f, std::max(0, g.jet_order()));
  Expr cur = Expr::var(g);
  for (int k = 1; k <= kmax; ++k) {
    int need = max_jet_order(cur);
    if (need > p.order) p = prolong(f, need);
    cur = apply_field(p, cur);
    std::set<Var> vars = free_vars(cur);
    for (const auto& v : vars) r.max_order = std::max(r.max_order, v.jet_order());
    r.sets.push_back(std::move(vars));
    if (cur.node_count() > node_budget) {
      r.budget_exceeded = true;
      break;
    }
  }
  std::size_t s = r.sets.size();
  r.stabilized = !r.budget_exceeded && s >= 2 && r.sets[s - 1] == r.sets[s - 2];
  return r;
}

}  // namespace lbjet
