#include "lbjet/truncation.hpp"

#include <algorithm>

namespace lbjet {

std::vector<Var> jet_coordinates(std::size_t n, int m, int k) {
  std::vector<Var> out;
  for (std::size_t i = 1; i <= n; ++i) out.push_back(Var::base(static_cast<int>(i)));
  for (const auto& a : multi_indices_up_to(n, k)) {
    for (int l = 1; l <= m; ++l) out.push_back(Var::jet(l, a));
  }
  return out;
}

Expr FiniteField::at(const Var& v) const {
  auto it = coef.find(v);
  return it == coef.end() ? Expr() : it->second;
}

Expr FiniteField::apply(const Expr& g) const {
  Expr out;
  for (const auto& v : free_vars(g)) {
    auto it = coef.find(v);
    if (it == coef.end() || it->second.is_structurally_zero()) continue;
    out += it->second * diff(g, v);
  }
  return out;
}

bool FiniteField::is_structurally_zero() const {
  return std::all_of(coef.begin(), coef.end(), [](const auto& kv) { return kv.second.is_structurally_zero(); });
}

std::string FiniteField::to_string() const {
  std::string s;
  for (const auto& [v, c] : coef) {
    if (c.is_structurally_zero()) continue;
    if (!s.empty()) s += " + ";
    s += "(" + c.to_string() + ")*d/d" + v.to_string();
  }
  return s.empty() ? "0" : s;
}

FiniteField lie_bracket(const FiniteField& a, const FiniteField& b) {
  if (a.n != b.n || a.m != b.m || a.k != b.k) throw PreconditionError("lie_bracket: signature mismatch");
  FiniteField r{a.n, a.m, a.k, {}};
  for (const auto& v : jet_coordinates(a.n, a.m, a.k)) {
    Expr c = a.apply(b.at(v)) - b.apply(a.at(v));
    if (!c.is_structurally_zero()) r.coef.emplace(v, std::move(c));
  }
  return r;
}

MultiPairSet dependency_set(const LBField& f, const ZeroTestOptions& opts) {
  MultiPairSet b(f.n, f.m);
  std::vector<Expr> comps = f.xi;
  comps.insert(comps.end(), f.eta0.begin(), f.eta0.end());
  for (const auto& c : comps) {
    for (const auto& v : jet_vars(c)) {
      if (is_zero(diff(c, v), opts) != ZeroStatus::ProvablyZero) b.insert(v.pair());
    }
  }
  return b;
}

Expr to_expr(const JetMonomial& mono) {
  Expr e(1);
  for (const auto& [v, k] : mono) e *= Expr::var(v).pow(k);
  return e;
}

std::string to_string(const JetMonomial& mono) { return to_expr(mono).to_string(); }

namespace {

int degree(const JetMonomial& m) {
  int d = 0;
  for (const auto& pw : m) d += pw.second;
  return d;
}

bool is_high(const Var& v, int k) { return v.is_jet() && v.jet_order() > k; }

void require_low(const Poly& p, int k, const std::string& where) {
  for (const auto& t : p.terms()) {
    for (const auto& pw : t.mono.powers()) {
      bool bad = pw.atom->is_function ? max_jet_order(Expr(*pw.atom->arg)) > k : is_high(pw.atom->var, k);
      if (bad) throw NonPolynomialError(where + " is not polynomial in jets of order > " + std::to_string(k));
    }
  }
}

// Groups the numerator by its high-jet part; each group keeps the full denominator.
std::map<JetMonomial, Expr> split_one(const Expr& e, int k, const std::string& where) {
  const RatFunc& r = e.rf();
  for (const auto& f : r.den()) require_low(f.poly, k, where + " denominator");
  std::map<JetMonomial, std::vector<Term>> groups;
  for (const auto& t : r.num().terms()) {
    JetMonomial high;
    std::vector<Power> low;
    for (const auto& pw : t.mono.powers()) {
      if (!pw.atom->is_function && is_high(pw.atom->var, k)) {
        high.emplace_back(pw.atom->var, pw.exp);
      } else {
        if (pw.atom->is_function && max_jet_order(Expr(*pw.atom->arg)) > k) {
          throw NonPolynomialError(where + " depends on jets of order > " + std::to_string(k) +
                                   " inside a function");
        }
        low.push_back(pw);
      }
    }
    std::sort(high.begin(), high.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    groups[high].push_back(Term{Monomial::from_powers(std::move(low)), t.coef});
  }
  std::map<JetMonomial, Expr> out;
  for (auto& [mono, terms] : groups) out.emplace(mono, Expr(RatFunc(Poly::from_terms(std::move(terms)), r.den())));
  return out;
}

}  // namespace

PolynomialSplit split(const LBField& f, const ProlongedField& p, int k) {
  int b = dependency_set(f).order();
  if (k < b) throw PreconditionError("split: k=" + std::to_string(k) + " is below |B|=" + std::to_string(b));
  if (p.order < k) throw PreconditionError("split: prolongation order " + std::to_string(p.order) + " < k");

  std::map<MultiPair, std::map<JetMonomial, Expr>> parts;
  std::vector<JetMonomial> monos;
  for (const auto& a : multi_indices_up_to(p.n, k)) {
    for (int l = 1; l <= p.m; ++l) {
      MultiPair mp{l, a};
      auto g = split_one(p.eta.at(mp), k, "eta" + mp.to_string());
      for (const auto& [mono, c] : g) {
        if (!mono.empty()) monos.push_back(mono);
      }
      parts.emplace(mp, std::move(g));
    }
  }

  // Variables in ascending order; monomials by total degree, then exponent
  // vector over those variables, larger exponents of earlier variables first.
  std::vector<Var> vars;
  for (const auto& mono : monos) {
    for (const auto& pw : mono) vars.push_back(pw.first);
  }
  std::sort(vars.begin(), vars.end());
  vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
  auto exponents = [&](const JetMonomial& mono) {
    std::vector<int> e(vars.size(), 0);
    for (const auto& [v, x] : mono) e[std::lower_bound(vars.begin(), vars.end(), v) - vars.begin()] = x;
    return e;
  };
  std::sort(monos.begin(), monos.end(), [&](const JetMonomial& a, const JetMonomial& b) {
    if (degree(a) != degree(b)) return degree(a) < degree(b);
    return exponents(a) > exponents(b);
  });
  monos.erase(std::unique(monos.begin(), monos.end()), monos.end());

  PolynomialSplit s;
  s.k = k;
  s.monomials = monos;
  for (auto& [mp, g] : parts) {
    SplitEntry entry;
    auto z = g.find(JetMonomial{});
    entry.grade_zero = z == g.end() ? Expr() : z->second;
    for (const auto& mono : monos) {
      auto it = g.find(mono);
      entry.coeffs.push_back(it == g.end() ? Expr() : it->second);
    }
    s.entries.emplace(mp, std::move(entry));
  }
  return s;
}

CheckEntry verify_split(const ProlongedField& p, const PolynomialSplit& s, const ZeroTestOptions& opts) {
  ZeroTally t("split_recombination", opts);
  for (const auto& [mp, entry] : s.entries) {
    Expr sum = entry.grade_zero;
    for (std::size_t l = 0; l < s.monomials.size(); ++l) sum += entry.coeffs[l] * to_expr(s.monomials[l]);
    t.expect_zero(sum - p.eta.at(mp), "eta" + mp.to_string());
    for (const auto& c : entry.coeffs) {
      if (max_jet_order(c) > s.k) t.note("coefficient of eta" + mp.to_string() + " leaves J^k");
    }
  }
  return t.take();
}

FiniteField build_Xk(const ProlongedField& p, const PolynomialSplit& s) {
  FiniteField x{p.n, p.m, s.k, {}};
  for (std::size_t i = 1; i <= p.n; ++i) x.coef[Var::base(static_cast<int>(i))] = p.xi[i - 1];
  for (const auto& [mp, entry] : s.entries) x.coef[Var::jet(mp.component, mp.alpha)] = entry.grade_zero;
  return x;
}

std::vector<FiniteField> build_Yk(const ProlongedField& p, const PolynomialSplit& s) {
  std::vector<FiniteField> out;
  for (std::size_t l = 0; l < s.monomials.size(); ++l) {
    FiniteField y{p.n, p.m, s.k, {}};
    for (const auto& [mp, entry] : s.entries) {
      if (!entry.coeffs[l].is_structurally_zero()) y.coef[Var::jet(mp.component, mp.alpha)] = entry.coeffs[l];
    }
    out.push_back(std::move(y));
  }
  return out;
}

}  // namespace lbjet
