#include "lbjet/lb_field.hpp"

#include "lbjet/jet_space.hpp"

namespace lbjet {

namespace {

void check_vars(const Expr& e, std::size_t n, int m, const char* what) {
  for (const auto& v : free_vars(e)) {
    bool ok = true;
    switch (v.kind) {
      case Var::Kind::Base:
        ok = v.index >= 1 && static_cast<std::size_t>(v.index) <= n;
        break;
      case Var::Kind::Jet:
        ok = v.index >= 1 && v.index <= m && v.alpha.dim() == n;
        break;
      case Var::Kind::Symbol:
        ok = false;
        break;
    }
    if (!ok) throw SignatureError(std::string(what) + " mentions " + v.to_string() + " outside the signature");
  }
}

Expr y(int l, const MultiIndex& a) { return Expr::jet(l, a); }

}  // namespace

LBField LBField::make(std::size_t n, int m, std::vector<Expr> xi, std::vector<Expr> eta0) {
  if (n < 1 || m < 1) throw SignatureError("signature needs n >= 1 and m >= 1");
  if (xi.size() != n) throw SignatureError("expected " + std::to_string(n) + " xi components");
  if (eta0.size() != static_cast<std::size_t>(m)) throw SignatureError("expected " + std::to_string(m) + " eta0 components");
  for (const auto& e : xi) check_vars(e, n, m, "xi");
  for (const auto& e : eta0) check_vars(e, n, m, "eta0");
  return LBField{n, m, std::move(xi), std::move(eta0)};
}

int LBField::order() const {
  int k = -1;
  for (const auto& e : xi) k = std::max(k, max_jet_order(e));
  for (const auto& e : eta0) k = std::max(k, max_jet_order(e));
  return k;
}

std::vector<Expr> epsilon0(const LBField& f) {
  std::vector<Expr> out;
  for (int l = 1; l <= f.m; ++l) {
    Expr e = f.eta0[l - 1];
    for (std::size_t i = 1; i <= f.n; ++i) e -= y(l, MultiIndex::unit(f.n, static_cast<int>(i))) * f.xi[i - 1];
    out.push_back(e);
  }
  return out;
}

namespace {

Expr eps_from_eta(const ProlongedField& p, int l, const MultiIndex& a, const Expr& eta) {
  Expr e = eta;
  for (std::size_t j = 1; j <= p.n; ++j) e -= y(l, a.raised(static_cast<int>(j))) * p.xi[j - 1];
  return e;
}

// eta^{parent+i}_L from eta^{parent}_L; dxi[i-1][j-1] = D^i xi_j.
Expr eta_step(const ProlongedField& p, const std::vector<std::vector<Expr>>& dxi, int l, const MultiIndex& parent,
              int i) {
  Expr e = total_derivative(p.eta_at(l, parent), i);
  for (std::size_t j = 1; j <= p.n; ++j) {
    const Expr& d = dxi[i - 1][j - 1];
    if (!d.is_structurally_zero()) e -= y(l, parent.raised(static_cast<int>(j))) * d;
  }
  return e;
}

std::vector<std::vector<Expr>> xi_derivatives(const ProlongedField& p) {
  std::vector<std::vector<Expr>> dxi(p.n);
  for (std::size_t i = 1; i <= p.n; ++i) {
    for (std::size_t j = 1; j <= p.n; ++j) dxi[i - 1].push_back(total_derivative(p.xi[j - 1], static_cast<int>(i)));
  }
  return dxi;
}

int first_direction(const MultiIndex& a) {
  for (std::size_t d = 0; d < a.dim(); ++d) {
    if (a[d] > 0) return static_cast<int>(d + 1);
  }
  return 0;
}

}  // namespace

ProlongedField prolong(const LBField& f, int k) {
  if (k < 0) throw std::invalid_argument("prolongation order must be >= 0");
  ProlongedField p;
  p.n = f.n;
  p.m = f.m;
  p.order = k;
  p.xi = f.xi;
  auto dxi = xi_derivatives(p);
  MultiIndex zero = MultiIndex::zero(f.n);
  for (int l = 1; l <= f.m; ++l) {
    p.eta[MultiPair{l, zero}] = f.eta0[l - 1];
    p.eps[MultiPair{l, zero}] = eps_from_eta(p, l, zero, f.eta0[l - 1]);
  }
  for (int ord = 1; ord <= k; ++ord) {
    for (const auto& a : multi_indices_of_order(f.n, ord)) {
      int i = first_direction(a);
      MultiIndex parent = a.lowered(i);
      for (int l = 1; l <= f.m; ++l) {
        Expr eta = eta_step(p, dxi, l, parent, i);
        p.eps[MultiPair{l, a}] = eps_from_eta(p, l, a, eta);
        p.eta[MultiPair{l, a}] = std::move(eta);
      }
    }
  }
  return p;
}

CheckEntry verify_lb_identity(const ProlongedField& p, const ZeroTestOptions& opts) {
  ZeroTally t("lb_identity", opts);
  for (int ord = 0; ord < p.order; ++ord) {
    for (const auto& a : multi_indices_of_order(p.n, ord)) {
      for (std::size_t i = 1; i <= p.n; ++i) {
        for (int l = 1; l <= p.m; ++l) {
          Expr defect = p.eps_at(l, a.raised(static_cast<int>(i))) - total_derivative(p.eps_at(l, a), static_cast<int>(i));
          t.expect_zero(defect, "L=" + std::to_string(l) + " alpha=" + a.to_string() + " i=" + std::to_string(i));
        }
      }
    }
  }
  return t.take();
}

CheckEntry check_path_independence(const ProlongedField& p, const ZeroTestOptions& opts) {
  ZeroTally t("path_independence", opts);
  auto dxi = xi_derivatives(p);
  for (int ord = 2; ord <= p.order; ++ord) {
    for (const auto& a : multi_indices_of_order(p.n, ord)) {
      int first = first_direction(a);
      for (std::size_t i = first + 1; i <= p.n; ++i) {
        if (a[i - 1] == 0) continue;
        for (int l = 1; l <= p.m; ++l) {
          Expr alt = eta_step(p, dxi, l, a.lowered(static_cast<int>(i)), static_cast<int>(i));
          t.expect_zero(alt - p.eta_at(l, a),
                        "L=" + std::to_string(l) + " alpha=" + a.to_string() + " via i=" + std::to_string(i));
        }
      }
    }
  }
  return t.take();
}

Expr apply_field(const ProlongedField& p, const Expr& g) {
  Expr out;
  for (const auto& v : free_vars(g)) {
    Expr d = diff(g, v);
    switch (v.kind) {
      case Var::Kind::Base:
        out += p.xi[v.index - 1] * d;
        break;
      case Var::Kind::Jet: {
        auto it = p.eta.find(v.pair());
        if (it == p.eta.end()) throw std::out_of_range("field not prolonged far enough for " + v.to_string());
        out += it->second * d;
        break;
      }
      case Var::Kind::Symbol:
        break;
    }
  }
  return out;
}

CheckEntry commutator_defect(const ProlongedField& p, int i, const std::vector<Expr>& tests, const ZeroTestOptions& opts) {
  ZeroTally t("commutator_defect_i" + std::to_string(i), opts);
  std::vector<std::pair<std::string, Expr>> gs;
  for (std::size_t j = 1; j <= p.n; ++j) gs.emplace_back("x" + std::to_string(j), Expr::base(static_cast<int>(j)));
  for (int ord = 0; ord < p.order; ++ord) {
    for (const auto& a : multi_indices_of_order(p.n, ord)) {
      for (int l = 1; l <= p.m; ++l) gs.emplace_back(Var::jet(l, a).to_string(), y(l, a));
    }
  }
  for (std::size_t k = 0; k < tests.size(); ++k) gs.emplace_back("test" + std::to_string(k + 1), tests[k]);

  std::vector<Expr> dxi;
  for (std::size_t j = 1; j <= p.n; ++j) dxi.push_back(total_derivative(p.xi[j - 1], i));
  for (const auto& [label, g] : gs) {
    Expr lhs = total_derivative(apply_field(p, g), i) - apply_field(p, total_derivative(g, i));
    Expr rhs;
    for (std::size_t j = 1; j <= p.n; ++j) rhs += dxi[j - 1] * total_derivative(g, static_cast<int>(j));
    t.expect_zero(lhs - rhs, label);
  }
  return t.take();
}

}  // namespace lbjet
