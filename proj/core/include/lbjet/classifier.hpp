#pragma once

#include <optional>
#include <set>
#include <stdexcept>
#include <vector>

#include "lbjet/lb_field.hpp"

namespace lbjet {

/// Arrow K -alpha-> L, present when d eps0_L / d y^alpha_K is not provably zero.
struct DepEdge {
  int from = 1;
  int to = 1;
  MultiIndex alpha;
  /// Set when the zero test was inconclusive and the edge is kept conservatively.
  bool flagged = false;
};

struct DepGraph {
  int m = 1;
  std::vector<DepEdge> edges;
};

DepGraph dependency_graph(const std::vector<Expr>& eps0, const ZeroTestOptions& opts = {});

/// Fails iff some directed cycle contains an arrow with alpha != 0.
CheckEntry check_cycle_condition(const DepGraph& g);

struct Theorem2Result {
  CheckEntry entry;
  std::vector<CheckEntry> parts;  // (i), (ii), (iii)
  /// The induced field xi_i = -dPhi/dy^i, eta0_L = Phi_L + sum_i y^i_L xi_i, when all parts pass.
  std::optional<LBField> field;
};

Theorem2Result check_theorem2(std::size_t n, const std::vector<Expr>& phi, const ZeroTestOptions& opts = {});

class InconsistencyError : public std::runtime_error {
 public:
  InconsistencyError(int i, int l, int l2, const std::string& detail)
      : std::runtime_error("xi_" + std::to_string(i) + " differs between L=" + std::to_string(l) + " and L=" +
                           std::to_string(l2) + ": " + detail),
        i_(i), l_(l), l2_(l2) {}
  int direction() const { return i_; }
  int first() const { return l_; }
  int second() const { return l2_; }

 private:
  int i_, l_, l2_;
};

/// xi_i = -d eps0_L / d y^i_L, required to agree across L.
std::vector<Expr> recover_xi(std::size_t n, const std::vector<Expr>& eps0, const ZeroTestOptions& opts = {});

struct FootprintReport {
  Var g;
  /// Free variables of X^k(g) for k = 1..steps.
  std::vector<std::set<Var>> sets;
  bool stabilized = false;
  /// Highest jet order seen in any footprint (-1 if none).
  int max_order = -1;
  bool budget_exceeded = false;
};

/// Bounded condition-F probe: iterates X on g up to kmax times, stopping early
/// when an iterate exceeds `node_budget` terms.
FootprintReport footprint_probe(const LBField& f, const Var& g, int kmax, std::size_t node_budget = 20000);

}  // namespace lbjet
