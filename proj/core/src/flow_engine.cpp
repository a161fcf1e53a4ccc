#include "lbjet/flow_engine.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "lbjet/jet_space.hpp"

namespace lbjet {

Var flow_time_var() { return Var::symbol("t"); }
Expr flow_time() { return Expr::var(flow_time_var()); }

FlowMap::FlowMap(std::size_t n, int m, std::vector<Expr> xi, std::vector<Expr> h0) : n_(n), m_(m), xi_(std::move(xi)) {
  if (xi_.size() != n) throw SignatureError("flow needs one Xi per base direction");
  if (h0.size() != static_cast<std::size_t>(m)) throw SignatureError("flow needs one H^0 per component");
  for (int l = 1; l <= m; ++l) explicit_[MultiPair{l, MultiIndex::zero(n)}] = h0[l - 1];
}

void FlowMap::set_component(const MultiPair& p, Expr e) {
  explicit_[p] = std::move(e);
  lifted_.clear();
}

const Expr& FlowMap::component(const MultiPair& p) const {
  auto e = explicit_.find(p);
  if (e != explicit_.end()) return e->second;
  auto c = lifted_.find(p);
  if (c != lifted_.end()) return c->second;
  return lift_component(*this, p);
}

const Expr& FlowMap::coordinate(const Var& v) const {
  switch (v.kind) {
    case Var::Kind::Base:
      return xi_.at(v.index - 1);
    case Var::Kind::Jet:
      return component(v.pair());
    case Var::Kind::Symbol:
      break;
  }
  throw std::invalid_argument("flow has no component for symbol " + v.to_string());
}

const Expr& lift_component(const FlowMap& flow, const MultiPair& target) {
  if (flow.n() != 1) throw PreconditionError("lifting is implemented for n = 1 only");
  if (flow.has_explicit(target)) return flow.component(target);
  if (target.alpha.order() == 0) throw std::logic_error("H^0 must be given explicitly");
  const Expr& parent = flow.component(MultiPair{target.component, target.alpha.lowered(1)});
  Expr dxi = total_derivative(flow.xi()[0], 1);
  if (dxi.is_structurally_zero()) throw std::domain_error("D Xi vanishes identically; the flow is degenerate");
  Expr next = total_derivative(parent, 1) / dxi;
  return flow.lifted_.emplace(target, std::move(next)).first->second;
}


namespace {

Var y0(int l) { return Var::jet(l, MultiIndex{0}); }
Var y1(int l) { return Var::jet(l, MultiIndex{1}); }
Var y2(int l) { return Var::jet(l, MultiIndex{2}); }

}  // namespace

void require_first_order_only(const LBField& f) {
  if (f.n != 1 || f.m != 2) throw SignatureError("closed-form flow needs n = 1 and m = 2");
  std::vector<Expr> comps = f.xi;
  comps.insert(comps.end(), f.eta0.begin(), f.eta0.end());
  for (const auto& c : comps) {
    for (const auto& v : free_vars(c)) {
      if (!(v.is_jet() && v.jet_order() == 1)) {
        throw SignatureError("closed-form flow needs xi and eta0 to depend on y^1 only; found " + v.to_string());
      }
    }
  }
}

H1Result h1_component(const LBField& f) {
  require_first_order_only(f);
  Expr t = flow_time();
  Expr den(1);
  for (int q = 1; q <= 2; ++q) den += t * Expr::var(y2(q)) * diff(f.xi[0], y1(q));
  H1Result r;
  r.denominator = den;
  for (int l = 1; l <= 2; ++l) {
    Expr num = Expr::var(y1(l));
    for (int q = 1; q <= 2; ++q) num += t * Expr::var(y2(q)) * diff(f.eta0[l - 1], y1(q));
    r.h1.push_back(num / den);
  }
  r.locus = den.is_constant() ? "" : den.to_string() + " = 0";
  return r;
}

FlowMap closed_form_flow(const LBField& f) {
  require_first_order_only(f);
  Expr t = flow_time();
  std::vector<Expr> h0;
  for (int l = 1; l <= 2; ++l) h0.push_back(Expr::var(y0(l)) + t * f.eta0[l - 1]);
  FlowMap flow(1, 2, {Expr::base(1) + t * f.xi[0]}, h0);
  H1Result h1 = h1_component(f);
  for (int l = 1; l <= 2; ++l) flow.set_component(MultiPair{l, MultiIndex{1}}, h1.h1[l - 1]);
  flow.singular_denominator = h1.denominator;
  flow.validity = h1.locus.empty() ? "" : "singular where " + h1.locus;
  return flow;
}

std::vector<double> rk4_integrate(const std::function<void(const double*, double*)>& rhs, std::vector<double> z,
                                  double t, double h) {
  if (!(h > 0)) throw std::invalid_argument("rk4 step must be positive");
  const std::size_t d = z.size();
  std::vector<double> k1(d), k2(d), k3(d), k4(d), tmp(d);
  double dir = t < 0 ? -1.0 : 1.0;
  double remaining = std::fabs(t);
  while (remaining > 0) {
    double step = std::min(h, remaining);
    // Guard against a sliver left by rounding.
    if (remaining - step < 1e-15 * std::max(1.0, std::fabs(t))) step = remaining;
    double dt = dir * step;
    rhs(z.data(), k1.data());
    for (std::size_t i = 0; i < d; ++i) tmp[i] = z[i] + 0.5 * dt * k1[i];
    rhs(tmp.data(), k2.data());
    for (std::size_t i = 0; i < d; ++i) tmp[i] = z[i] + 0.5 * dt * k2[i];
    rhs(tmp.data(), k3.data());
    for (std::size_t i = 0; i < d; ++i) tmp[i] = z[i] + dt * k3[i];
    rhs(tmp.data(), k4.data());
    for (std::size_t i = 0; i < d; ++i) z[i] += dt / 6.0 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
    remaining -= step;
  }
  return z;
}

std::map<Var, double> rk4_flow(const FiniteField& xk, const std::map<Var, double>& point, double t, double h) {
  std::vector<Var> coords = jet_coordinates(xk.n, xk.m, xk.k);
  std::vector<CompiledExpr> rhs;
  for (const auto& v : coords) rhs.emplace_back(xk.at(v), coords);
  std::vector<double> z;
  for (const auto& v : coords) {
    auto it = point.find(v);
    z.push_back(it == point.end() ? 0.0 : it->second);
  }
  auto f = [&](const double* in, double* out) {
    for (std::size_t i = 0; i < rhs.size(); ++i) {
      out[i] = rhs[i](in);
      if (!std::isfinite(out[i])) throw EvalError(EvalError::Kind::Domain, "non-finite field value on trajectory");
    }
  };
  z = rk4_integrate(f, std::move(z), t, h);
  std::map<Var, double> out;
  for (std::size_t i = 0; i < coords.size(); ++i) out[coords[i]] = z[i];
  return out;
}

namespace {

std::vector<Var> outer_coordinates(const FlowMap& flow, int order) {
  std::vector<Var> out;
  for (std::size_t i = 1; i <= flow.n(); ++i) out.push_back(Var::base(static_cast<int>(i)));
  for (const auto& a : multi_indices_up_to(flow.n(), order)) {
    for (int l = 1; l <= flow.m(); ++l) out.push_back(Var::jet(l, a));
  }
  return out;
}

std::set<Var> non_time_vars(const Expr& e) {
  std::set<Var> out;
  for (const auto& v : free_vars(e)) {
    if (v.kind != Var::Kind::Symbol) out.insert(v);
  }
  return out;
}

bool usable(double v) { return std::isfinite(v) && std::fabs(v) < 1e8; }

// Compiled components over slots (t, sampled vars...).
struct CompiledFlow {
  std::vector<Var> slots;
  std::map<Var, CompiledExpr> comp;

  CompiledFlow(const FlowMap& flow, const std::vector<Var>& needed) {
    std::set<Var> vars;
    for (const auto& w : needed) {
      for (const auto& v : non_time_vars(flow.coordinate(w))) vars.insert(v);
    }
    slots.push_back(flow_time_var());
    slots.insert(slots.end(), vars.begin(), vars.end());
    for (const auto& w : needed) comp.emplace(w, CompiledExpr(flow.coordinate(w), slots));
  }
};

}  // namespace

namespace {

Rational sample_rational(SampleRng& rng, double bound) {
  const long den = 1000;
  long hi = std::lround(bound * den);
  Rational r(static_cast<long>(uniform_int(rng, -hi, hi)), static_cast<unsigned long>(den));
  r.canonicalize();
  return r;
}

struct Residuals {
  double worst = 0.0;
  std::string at;

  void add(const std::string& name, double v) {
    if (v > worst) {
      worst = v;
      at = name;
    }
  }
};

}  // namespace

GroupLawResult verify_group_law_numeric(const FlowMap& flow, const FlowCheckOptions& opts) {
  GroupLawResult r;
  CheckEntry& e = r.entry;
  e.name = "group_law";
  e.mode = ProofMode::Sampled;

  std::vector<Var> outer = outer_coordinates(flow, opts.order);
  // Inner components needed: every variable an outer component depends on.
  std::set<Var> inner_set(outer.begin(), outer.end());
  for (const auto& c : outer) {
    for (const auto& v : non_time_vars(flow.coordinate(c))) inner_set.insert(v);
  }
  std::vector<Var> inner(inner_set.begin(), inner_set.end());
  bool rational = std::none_of(inner.begin(), inner.end(), [&](const Var& v) { return flow.coordinate(v).has_function(); });

  SampleRng rng(opts.seed);
  int taken = 0;
  Residuals worst;
  const Var tv = flow_time_var();

  if (rational) {
    // Exact composition at rational points: the residual carries no rounding.
    std::set<Var> slot_set;
    for (const auto& w : inner) {
      for (const auto& v : non_time_vars(flow.coordinate(w))) slot_set.insert(v);
    }
    while (taken < opts.samples && r.singular_resamples < 50 * opts.samples) {
      Valuation p;
      for (const auto& v : slot_set) p[v] = sample_rational(rng, opts.range);
      Rational t = sample_rational(rng, opts.t), s = sample_rational(rng, opts.s);
      try {
        Valuation ps = p, q = p, pts = p;
        ps[tv] = Number(s);
        q[tv] = Number(t);
        pts[tv] = Number(Rational(t + s));
        for (const auto& w : inner) q[w] = eval(flow.coordinate(w), ps);
        std::vector<std::pair<std::string, double>> res;
        for (const auto& c : outer) {
          Number lhs = eval(flow.coordinate(c), q), rhs = eval(flow.coordinate(c), pts);
          Number diff = lhs - rhs;
          double v = diff.is_zero() ? 0.0 : std::fabs(diff.to_double()) / std::max(1.0, std::fabs(rhs.to_double()));
          res.emplace_back(c.to_string(), v);
        }
        ++taken;
        for (const auto& [name, v] : res) worst.add(name, v);
      } catch (const EvalError&) {
        ++r.singular_resamples;
      }
    }
    e.details.push_back("exact rational composition");
  } else {
    CompiledFlow cf(flow, inner);
    const std::size_t d = cf.slots.size();
    while (taken < opts.samples && r.singular_resamples < 50 * opts.samples) {
      std::vector<double> p(d);
      for (std::size_t i = 1; i < d; ++i) p[i] = uniform(rng, -opts.range, opts.range);
      double t = uniform(rng, -opts.t, opts.t);
      double s = uniform(rng, -opts.s, opts.s);
      try {
        // Phi_s(p) on every inner coordinate, laid out in the same slots.
        std::vector<double> ps = p, q(d);
        ps[0] = s;
        q[0] = t;
        for (std::size_t i = 1; i < d; ++i) {
          // Slots only the inner components read never reach the outer ones.
          auto it = cf.comp.find(cf.slots[i]);
          if (it == cf.comp.end()) continue;
          q[i] = it->second(ps.data());
          if (!usable(q[i])) throw EvalError(EvalError::Kind::Domain, "inner value out of range");
        }
        std::vector<double> pts = p;
        pts[0] = t + s;
        std::vector<std::pair<std::string, double>> res;
        for (const auto& c : outer) {
          double lhs = cf.comp.at(c)(q.data());
          double rhs = cf.comp.at(c)(pts.data());
          if (!usable(lhs) || !usable(rhs)) throw EvalError(EvalError::Kind::Domain, "component out of range");
          res.emplace_back(c.to_string(), std::fabs(lhs - rhs) / std::max(1.0, std::fabs(rhs)));
        }
        ++taken;
        for (const auto& [name, v] : res) worst.add(name, v);
      } catch (const EvalError&) {
        ++r.singular_resamples;
      }
    }
    e.details.push_back("double-precision composition");
  }
  e.residual = worst.worst;
  e.witness = worst.at;
  e.details.push_back("samples " + std::to_string(taken) + ", singular resamples " +
                      std::to_string(r.singular_resamples));
  if (taken < opts.samples) {
    e.verdict = Verdict::Unknown;
  } else {
    e.verdict = worst.worst < opts.tol ? Verdict::Pass : Verdict::Fail;
  }
  return r;
}

CheckEntry verify_group_law_symbolic(const FlowMap& flow, int order, const ZeroTestOptions& zt) {
  ZeroTally tally("group_law_symbolic", zt);
  Expr t = flow_time();
  Var sv = Var::symbol("s");
  Expr s = Expr::var(sv);
  for (const auto& c : outer_coordinates(flow, order)) {
    const Expr& outer = flow.coordinate(c);
    std::map<Var, Expr> bind;
    for (const auto& v : non_time_vars(outer)) bind[v] = substitute(flow.coordinate(v), {{flow_time_var(), s}});
    Expr composed = substitute(outer, bind);
    Expr target = substitute(outer, {{flow_time_var(), t + s}});
    tally.expect_zero(composed - target, c.to_string());
  }
  return tally.take();
}

CheckEntry verify_eq2(const FlowMap& flow, int k, const ZeroTestOptions& zt) {
  if (flow.n() != 1) throw PreconditionError("verify_eq2 is implemented for n = 1");
  ZeroTally tally("eq2", zt);
  Expr dxi = total_derivative(flow.xi()[0], 1);
  for (int a = 0; a < k; ++a) {
    for (int l = 1; l <= flow.m(); ++l) {
      const Expr& next = flow.component(MultiPair{l, MultiIndex{a + 1}});
      const Expr& cur = flow.component(MultiPair{l, MultiIndex{a}});
      tally.expect_zero(dxi * next - total_derivative(cur, 1), "L=" + std::to_string(l) + " alpha=" + std::to_string(a));
    }
  }
  return tally.take();
}

CheckEntry verify_eq2_numeric(const FlowMap& flow, int k, const FlowCheckOptions& opts) {
  if (flow.n() != 1) throw PreconditionError("verify_eq2 is implemented for n = 1");
  CheckEntry e;
  e.name = "eq2_numeric";
  e.mode = ProofMode::Sampled;
  Expr dxi = total_derivative(flow.xi()[0], 1);
  std::vector<std::pair<std::string, std::pair<Expr, Expr>>> items;
  std::set<Var> vars;
  for (int a = 0; a < k; ++a) {
    for (int l = 1; l <= flow.m(); ++l) {
      Expr lhs = dxi * flow.component(MultiPair{l, MultiIndex{a + 1}});
      Expr rhs = total_derivative(flow.component(MultiPair{l, MultiIndex{a}}), 1);
      for (const auto& v : non_time_vars(lhs)) vars.insert(v);
      for (const auto& v : non_time_vars(rhs)) vars.insert(v);
      items.push_back({"L=" + std::to_string(l) + " alpha=" + std::to_string(a), {lhs, rhs}});
    }
  }
  std::vector<Var> slots{flow_time_var()};
  slots.insert(slots.end(), vars.begin(), vars.end());
  std::vector<std::pair<CompiledExpr, CompiledExpr>> compiled;
  for (const auto& it : items) compiled.emplace_back(CompiledExpr(it.second.first, slots), CompiledExpr(it.second.second, slots));

  SampleRng rng(opts.seed + 1);
  int taken = 0, rejected = 0;
  double worst = 0.0;
  while (taken < opts.samples && rejected < 50 * opts.samples) {
    std::vector<double> p(slots.size());
    p[0] = uniform(rng, -opts.t, opts.t);
    for (std::size_t i = 1; i < p.size(); ++i) p[i] = uniform(rng, -opts.range, opts.range);
    try {
      std::vector<double> res;
      for (std::size_t i = 0; i < compiled.size(); ++i) {
        double a = compiled[i].first(p.data()), b = compiled[i].second(p.data());
        if (!usable(a) || !usable(b)) throw EvalError(EvalError::Kind::Domain, "out of range");
        res.push_back(std::fabs(a - b) / std::max(1.0, std::fabs(b)));
      }
      ++taken;
      for (std::size_t i = 0; i < res.size(); ++i) {
        if (res[i] > worst) {
          worst = res[i];
          e.witness = items[i].first;
        }
      }
    } catch (const EvalError&) {
      ++rejected;
    }
  }
  e.residual = worst;
  e.details.push_back("samples " + std::to_string(taken) + ", singular resamples " + std::to_string(rejected));
  e.verdict = taken < opts.samples ? Verdict::Unknown : (worst < opts.tol ? Verdict::Pass : Verdict::Fail);
  return e;
}

GermFlowResult germ_flow(const FlowMap& flow, const std::vector<Expr>& f, double a, double b, double t, int samples) {
  if (flow.n() != 1) throw PreconditionError("germ_flow is implemented for n = 1");
  if (f.size() != static_cast<std::size_t>(flow.m())) throw SignatureError("germ_flow needs one function per component");
  if (samples < 2 || !(b > a)) throw std::invalid_argument("germ_flow needs a < b and at least two samples");
  const int m = flow.m();
  Var xv = Var::base(1);

  const Expr& xi = flow.xi()[0];
  std::vector<Expr> h0, h1;
  for (int l = 1; l <= m; ++l) {
    h0.push_back(flow.component(MultiPair{l, MultiIndex{0}}));
    h1.push_back(flow.component(MultiPair{l, MultiIndex{1}}));
  }
  int order = max_jet_order(xi);
  for (int l = 0; l < m; ++l) order = std::max({order, max_jet_order(h0[l]), max_jet_order(h1[l])});

  // tau f: y^k_L -> d^k f_L / dx^k.
  std::map<Var, Expr> tau;
  for (int l = 1; l <= m; ++l) {
    Expr d = f[l - 1];
    for (int k = 0; k <= order; ++k) {
      tau[Var::jet(l, MultiIndex{k})] = d;
      d = diff(d, xv);
    }
  }
  std::vector<Var> slots{xv, flow_time_var()};
  bool identity_base = (xi - Expr::base(1)).is_structurally_zero();
  CompiledExpr psi(substitute(xi, tau), slots);
  std::vector<CompiledExpr> h0c, h1c, fc;
  for (int l = 0; l < m; ++l) {
    h0c.emplace_back(substitute(h0[l], tau), slots);
    h1c.emplace_back(substitute(h1[l], tau), slots);
    fc.emplace_back(f[l], slots);
  }
  auto call = [&](const CompiledExpr& c, double x) {
    double args[2] = {x, t};
    return c(args);
  };

  GermFlowResult r;
  r.t = t;
  r.f.assign(m, {});
  r.ft.assign(m, {});
  for (int j = 0; j < samples; ++j) {
    double x = a + (b - a) * j / (samples - 1);
    r.x.push_back(x);
    r.psi.push_back(call(psi, x));
    for (int l = 0; l < m; ++l) r.f[l].push_back(call(fc[l], x));
  }
  double sign = 0;
  for (int j = 1; j < samples; ++j) {
    double d = r.psi[j] - r.psi[j - 1];
    double sg = d > 0 ? 1 : (d < 0 ? -1 : 0);
    if (sg == 0 || (sign != 0 && sg != sign)) r.invertible = false;
    if (sign == 0) sign = sg;
  }
  if (!r.invertible) r.notes.push_back("Psi_t is not monotone on the sampled window");

  // Psi_t^{-1} by bisection on a bracket around the window.
  double span = b - a;
  auto invert = [&](double x) -> double {
    if (identity_base || t == 0.0) return x;
    double lo = a - span - 1, hi = b + span + 1;
    double flo = call(psi, lo) - x, fhi = call(psi, hi) - x;
    if (std::isnan(flo) || std::isnan(fhi) || flo * fhi > 0) return std::nan("");
    for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::fabs(x)); ++it) {
      double mid = 0.5 * (lo + hi);
      double fm = call(psi, mid) - x;
      if (fm == 0) return mid;
      if ((fm < 0) == (flo < 0)) {
        lo = mid;
        flo = fm;
      } else {
        hi = mid;
      }
    }
    return 0.5 * (lo + hi);
  };

  // Central differences at delta and delta/2, Richardson-combined.
  const double delta = 1e-3;
  for (int j = 0; j < samples; ++j) {
    double x = r.x[j];
    double u = invert(x);
    for (int l = 0; l < m; ++l) r.ft[l].push_back(std::isnan(u) ? u : call(h0c[l], u));
    if (std::isnan(u) || !r.invertible) continue;
    double up = invert(x + delta), um = invert(x - delta);
    double uph = invert(x + delta / 2), umh = invert(x - delta / 2);
    if (std::isnan(up) || std::isnan(um) || std::isnan(uph) || std::isnan(umh)) continue;
    for (int l = 0; l < m; ++l) {
      double d1 = (call(h0c[l], up) - call(h0c[l], um)) / (2 * delta);
      double d2 = (call(h0c[l], uph) - call(h0c[l], umh)) / delta;
      double fd = (4 * d2 - d1) / 3;
      double ex = call(h1c[l], u);
      r.h1_residual = std::max(r.h1_residual, std::fabs(fd - ex) / std::max(1.0, std::fabs(ex)));
    }
  }
  r.h1_ok = r.h1_residual < 1e-6;
  if (!r.h1_ok) r.notes.push_back("transformed derivative disagrees with H^1");
  return r;
}

std::string germ_csv(const GermFlowResult& r) {
  std::ostringstream os;
  os.precision(17);
  const std::size_t m = r.f.size();
  os << "t,x";
  for (std::size_t l = 1; l <= m; ++l) os << ",f" << l;
  for (std::size_t l = 1; l <= m; ++l) os << ",f" << l << "t";
  os << ",psi_t\r\n";
  for (std::size_t j = 0; j < r.x.size(); ++j) {
    os << r.t << "," << r.x[j];
    for (std::size_t l = 0; l < m; ++l) os << "," << r.f[l][j];
    for (std::size_t l = 0; l < m; ++l) os << "," << r.ft[l][j];
    os << "," << r.psi[j] << "\r\n";
  }
  return os.str();
}

}  // namespace lbjet
