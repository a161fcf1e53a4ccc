#include "lbjet/expr.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <sstream>
#include <unordered_map>

#include "lbjet/sampling.hpp"

namespace lbjet {

// ---------------------------------------------------------------------------
// Number

double Number::to_double() const {
  if (is_exact()) return lbjet::to_double(exact());
  return std::get<double>(v_);
}

bool Number::is_zero() const { return is_exact() ? sgn(exact()) == 0 : std::get<double>(v_) == 0.0; }

Number Number::operator+(const Number& o) const {
  if (is_exact() && o.is_exact()) return Number(Rational(exact() + o.exact()));
  return Number(to_double() + o.to_double());
}

Number Number::operator-(const Number& o) const {
  if (is_exact() && o.is_exact()) return Number(Rational(exact() - o.exact()));
  return Number(to_double() - o.to_double());
}

Number Number::operator*(const Number& o) const {
  if (is_exact() && o.is_exact()) return Number(Rational(exact() * o.exact()));
  return Number(to_double() * o.to_double());
}

Number Number::operator/(const Number& o) const {
  if (o.is_zero()) throw EvalError(EvalError::Kind::DivisionByZero, "division by zero");
  if (is_exact() && o.is_exact()) return Number(Rational(exact() / o.exact()));
  return Number(to_double() / o.to_double());
}

Number Number::operator-() const {
  if (is_exact()) return Number(Rational(-exact()));
  return Number(-to_double());
}

Number Number::pow(int k) const {
  if (k < 0) return Number(1) / pow(-k);
  Number r(1);
  for (int i = 0; i < k; ++i) r = r * *this;
  return r;
}

std::string Number::to_string() const {
  if (is_exact()) return exact().get_str();
  std::ostringstream os;
  os.precision(17);
  os << to_double();
  return os.str();
}

// ---------------------------------------------------------------------------
// Construction

Expr::Expr() : rf_(std::make_shared<const RatFunc>()) {}
Expr::Expr(int c) : rf_(std::make_shared<const RatFunc>(Rational(c))) {}
Expr::Expr(const Rational& c) : rf_(std::make_shared<const RatFunc>(c)) {}
Expr::Expr(RatFunc rf) : rf_(std::make_shared<const RatFunc>(std::move(rf))) {}

Expr Expr::var(const Var& v) { return Expr(RatFunc::var(v)); }

namespace {

bool exact_sqrt(const Rational& q, Rational* out) {
  if (sgn(q) < 0) return false;
  mpz_class n = q.get_num(), d = q.get_den();
  mpz_class rn = sqrt(n), rd = sqrt(d);
  if (rn * rn != n || rd * rd != d) return false;
  *out = Rational(rn, rd);
  out->canonicalize();
  return true;
}

RatFunc make_function(FuncKind f, const RatFunc& arg) {
  if (arg.is_constant()) {
    Rational c = arg.constant_value();
    switch (f) {
      case FuncKind::Sin:
        if (sgn(c) == 0) return RatFunc(Rational(0));
        break;
      case FuncKind::Cos:
      case FuncKind::Exp:
        if (sgn(c) == 0) return RatFunc(Rational(1));
        break;
      case FuncKind::Ln:
        if (c == 1) return RatFunc(Rational(0));
        break;
      case FuncKind::Sqrt: {
        Rational r;
        if (exact_sqrt(c, &r)) return RatFunc(r);
        break;
      }
    }
  }
  return RatFunc(Poly(Monomial(make_func_atom(f, arg))));
}

}  // namespace

Expr Expr::func(FuncKind f, const Expr& arg) { return Expr(make_function(f, arg.rf())); }

Expr sin(const Expr& e) { return Expr::func(FuncKind::Sin, e); }
Expr cos(const Expr& e) { return Expr::func(FuncKind::Cos, e); }
Expr exp(const Expr& e) { return Expr::func(FuncKind::Exp, e); }
Expr ln(const Expr& e) { return Expr::func(FuncKind::Ln, e); }
Expr sqrt(const Expr& e) { return Expr::func(FuncKind::Sqrt, e); }

bool Expr::is_rational_constant(Rational* out) const {
  if (!rf_->is_constant()) return false;
  if (out) *out = rf_->constant_value();
  return true;
}

namespace {

bool poly_has_function(const Poly& p);

bool atom_has_function(const Atom& a) { return a.is_function; }

bool poly_has_function(const Poly& p) {
  for (const auto& t : p.terms()) {
    for (const auto& pw : t.mono.powers()) {
      if (atom_has_function(*pw.atom)) return true;
    }
  }
  return false;
}

bool rf_has_function(const RatFunc& r) {
  if (poly_has_function(r.num())) return true;
  for (const auto& f : r.den()) {
    if (poly_has_function(f.poly)) return true;
  }
  return false;
}

std::size_t rf_nodes(const RatFunc& r);

std::size_t poly_nodes(const Poly& p) {
  std::size_t n = 0;
  for (const auto& t : p.terms()) {
    n += 1;
    for (const auto& pw : t.mono.powers()) {
      if (pw.atom->is_function) n += rf_nodes(*pw.atom->arg);
    }
  }
  return n;
}

std::size_t rf_nodes(const RatFunc& r) {
  std::size_t n = poly_nodes(r.num());
  for (const auto& f : r.den()) n += poly_nodes(f.poly);
  return n;
}

}  // namespace

bool Expr::has_function() const { return rf_has_function(*rf_); }

std::size_t Expr::node_count() const { return rf_nodes(*rf_); }

Expr::Kind Expr::kind() const {
  const RatFunc& r = *rf_;
  if (!r.den().empty()) return Kind::Quotient;
  const Poly& p = r.num();
  if (p.is_constant()) return Kind::Constant;
  if (p.terms().size() > 1) return Kind::Sum;
  const Term& t = p.leading();
  if (t.coef != 1 || t.mono.powers().size() > 1) return Kind::Product;
  const Power& pw = t.mono.powers().front();
  if (pw.exp > 1) return Kind::Power;
  return pw.atom->is_function ? Kind::Function : Kind::Variable;
}

std::vector<Expr> Expr::children() const {
  const RatFunc& r = *rf_;
  std::vector<Expr> out;
  switch (kind()) {
    case Kind::Constant:
    case Kind::Variable:
      break;
    case Kind::Quotient:
      out.emplace_back(RatFunc(r.num()));
      out.emplace_back(RatFunc(r.den_poly()));
      break;
    case Kind::Sum:
      for (const auto& t : r.num().terms()) out.emplace_back(RatFunc(Poly(t.mono, t.coef)));
      break;
    case Kind::Product: {
      const Term& t = r.num().leading();
      if (t.coef != 1) out.emplace_back(t.coef);
      for (const auto& pw : t.mono.powers()) out.emplace_back(RatFunc(Poly(Monomial(pw.atom, pw.exp))));
      break;
    }
    case Kind::Power: {
      const Power& pw = r.num().leading().mono.powers().front();
      out.emplace_back(RatFunc(Poly(Monomial(pw.atom))));
      out.emplace_back(pw.exp);
      break;
    }
    case Kind::Function:
      out.emplace_back(*r.num().leading().mono.powers().front().atom->arg);
      break;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Printing

namespace {

std::string print_rf(const RatFunc& r);

std::string print_atom(const Atom& a) {
  if (!a.is_function) return a.var.to_string();
  return std::string(func_name(a.func)) + "(" + print_rf(*a.arg) + ")";
}

std::string print_mono(const Monomial& m) {
  std::string s;
  for (const auto& pw : m.powers()) {
    if (!s.empty()) s += "*";
    s += print_atom(*pw.atom);
    if (pw.exp != 1) s += "^" + std::to_string(pw.exp);
  }
  return s;
}

// Magnitude of one term (sign handled by the caller).
std::string print_term_abs(const Term& t) {
  Rational c = abs(t.coef);
  if (t.mono.is_one()) return c.get_str();
  if (c == 1) return print_mono(t.mono);
  return c.get_str() + "*" + print_mono(t.mono);
}

std::string print_poly(const Poly& p) {
  if (p.is_zero()) return "0";
  std::string s;
  bool first = true;
  for (const auto& t : p.terms()) {
    bool neg = sgn(t.coef) < 0;
    if (first) {
      if (neg) s += "-";
    } else {
      s += neg ? " - " : " + ";
    }
    s += print_term_abs(t);
    first = false;
  }
  return s;
}

std::string print_rf(const RatFunc& r) {
  if (r.den().empty()) return print_poly(r.num());
  std::string s;
  if (r.num().terms().size() == 1) {
    s = print_poly(r.num());
  } else {
    s = "(" + print_poly(r.num()) + ")";
  }
  for (const auto& f : r.den()) {
    s += "/";
    const auto& terms = f.poly.terms();
    bool single_atom = terms.size() == 1 && terms[0].coef == 1 && terms[0].mono.powers().size() == 1 &&
                       terms[0].mono.powers()[0].exp == 1;
    if (single_atom) {
      s += print_atom(*terms[0].mono.powers()[0].atom);
    } else {
      s += "(" + print_poly(f.poly) + ")";
    }
    if (f.exp != 1) s += "^" + std::to_string(f.exp);
  }
  return s;
}

}  // namespace

std::string Expr::to_string() const { return print_rf(*rf_); }

// ---------------------------------------------------------------------------
// Differentiation

namespace {

// A derivation fixed by its values on variables; the chain rule handles
// function atoms and the quotient rule the factored denominator.
class Deriver {
 public:
  explicit Deriver(const std::function<Expr(const Var&)>& on_var) : on_var_(on_var) {}

  RatFunc rf(const RatFunc& r) {
    RatFunc s = poly(r.num());
    if (r.den().empty()) return s;
    RatFunc n(r.num());
    for (const auto& f : r.den()) {
      RatFunc df = poly(f.poly);
      if (df.is_zero()) continue;
      s = s - n * df * RatFunc(Rational(f.exp)) / RatFunc(f.poly);
    }
    if (s.is_zero()) return s;
    return s * RatFunc(Poly(Rational(1)), r.den());
  }

 private:
  RatFunc poly(const Poly& p) {
    RatFunc acc;
    for (const auto& t : p.terms()) {
      for (const auto& pw : t.mono.powers()) {
        const RatFunc& da = atom(pw.atom);
        if (da.is_zero()) continue;
        int e = 0;
        Monomial rest = t.mono.without(*pw.atom, &e);
        if (e > 1) rest = rest * Monomial(pw.atom, e - 1);
        acc = acc + RatFunc(Poly(std::move(rest), t.coef * e)) * da;
      }
    }
    return acc;
  }

  const RatFunc& atom(const AtomPtr& a) {
    auto it = cache_.find(a.get());
    if (it != cache_.end()) return it->second;
    RatFunc out;
    if (!a->is_function) {
      out = on_var_(a->var).rf();
    } else {
      const RatFunc& u = *a->arg;
      RatFunc du = rf(u);
      if (!du.is_zero()) {
        switch (a->func) {
          case FuncKind::Sin:
            out = make_function(FuncKind::Cos, u) * du;
            break;
          case FuncKind::Cos:
            out = -(make_function(FuncKind::Sin, u) * du);
            break;
          case FuncKind::Exp:
            out = make_function(FuncKind::Exp, u) * du;
            break;
          case FuncKind::Ln:
            out = du / u;
            break;
          case FuncKind::Sqrt:
            out = du / (RatFunc(Rational(2)) * make_function(FuncKind::Sqrt, u));
            break;
        }
      }
    }
    keep_.push_back(a);
    return cache_.emplace(a.get(), std::move(out)).first->second;
  }

  const std::function<Expr(const Var&)>& on_var_;
  std::unordered_map<const Atom*, RatFunc> cache_;
  std::vector<AtomPtr> keep_;
};

void collect_vars(const RatFunc& r, std::set<Var>& out);

void collect_poly_vars(const Poly& p, std::set<Var>& out) {
  for (const auto& t : p.terms()) {
    for (const auto& pw : t.mono.powers()) {
      if (pw.atom->is_function) {
        collect_vars(*pw.atom->arg, out);
      } else {
        out.insert(pw.atom->var);
      }
    }
  }
}

void collect_vars(const RatFunc& r, std::set<Var>& out) {
  collect_poly_vars(r.num(), out);
  for (const auto& f : r.den()) collect_poly_vars(f.poly, out);
}

}  // namespace

Expr derive(const Expr& e, const std::function<Expr(const Var&)>& on_var) {
  Deriver d(on_var);
  return Expr(d.rf(e.rf()));
}

Expr diff(const Expr& e, const Var& v) {
  static const Expr one(1), zero(0);
  return derive(e, [&](const Var& w) { return w == v ? one : zero; });
}

std::set<Var> free_vars(const Expr& e) {
  std::set<Var> out;
  collect_vars(e.rf(), out);
  return out;
}

std::set<Var> jet_vars(const Expr& e) {
  std::set<Var> out;
  for (const auto& v : free_vars(e)) {
    if (v.is_jet()) out.insert(v);
  }
  return out;
}

int max_jet_order(const Expr& e) {
  int k = -1;
  for (const auto& v : free_vars(e)) k = std::max(k, v.jet_order());
  return k;
}

// ---------------------------------------------------------------------------
// Substitution

namespace {

class Substituter {
 public:
  explicit Substituter(const std::map<Var, Expr>& b) : bindings_(b) {}

  RatFunc rf(const RatFunc& r) {
    RatFunc out = poly(r.num());
    for (const auto& f : r.den()) {
      RatFunc d = poly(f.poly);
      if (d.is_zero()) throw EvalError(EvalError::Kind::DivisionByZero, "substitution makes a denominator vanish");
      out = out / d.pow(f.exp);
    }
    return out;
  }

 private:
  RatFunc poly(const Poly& p) {
    RatFunc acc;
    std::vector<Term> untouched;
    for (const auto& t : p.terms()) {
      RatFunc term(Poly(Monomial{}, t.coef));
      std::vector<Power> kept;
      bool changed = false;
      for (const auto& pw : t.mono.powers()) {
        const RatFunc* img = atom(pw.atom);
        if (img) {
          term = term * img->pow(pw.exp);
          changed = true;
        } else {
          kept.push_back(pw);
        }
      }
      if (!changed) {
        untouched.push_back(t);
        continue;
      }
      term = term * RatFunc(Poly(Monomial::from_powers(std::move(kept))));
      acc = acc + term;
    }
    return RatFunc(Poly::from_terms(std::move(untouched))) + acc;
  }

  // Image of an atom, or nullptr when it is unchanged.
  const RatFunc* atom(const AtomPtr& a) {
    auto it = cache_.find(a.get());
    if (it != cache_.end()) return it->second.get();
    std::shared_ptr<RatFunc> img;
    if (!a->is_function) {
      auto b = bindings_.find(a->var);
      if (b != bindings_.end()) img = std::make_shared<RatFunc>(b->second.rf());
    } else {
      RatFunc arg = rf(*a->arg);
      if (!(arg == *a->arg)) img = std::make_shared<RatFunc>(make_function(a->func, arg));
    }
    keep_.push_back(a);
    cache_[a.get()] = img;
    return img.get();
  }

  const std::map<Var, Expr>& bindings_;
  std::unordered_map<const Atom*, std::shared_ptr<RatFunc>> cache_;
  std::vector<AtomPtr> keep_;
};

}  // namespace

Expr substitute(const Expr& e, const std::map<Var, Expr>& bindings) {
  if (bindings.empty()) return e;
  Substituter s(bindings);
  return Expr(s.rf(e.rf()));
}

// ---------------------------------------------------------------------------
// Evaluation

namespace {

double apply_function(FuncKind f, double x) {
  switch (f) {
    case FuncKind::Sin:
      return std::sin(x);
    case FuncKind::Cos:
      return std::cos(x);
    case FuncKind::Exp:
      return std::exp(x);
    case FuncKind::Ln:
      if (!(x > 0)) throw EvalError(EvalError::Kind::Domain, "ln of a non-positive value");
      return std::log(x);
    case FuncKind::Sqrt:
      if (x < 0) throw EvalError(EvalError::Kind::Domain, "sqrt of a negative value");
      return std::sqrt(x);
  }
  return 0.0;
}

class Evaluator {
 public:
  explicit Evaluator(const Valuation& v) : val_(v) {}

  Number rf(const RatFunc& r) {
    Number n = poly(r.num());
    for (const auto& f : r.den()) {
      Number d = poly(f.poly);
      if (d.is_zero()) throw EvalError(EvalError::Kind::DivisionByZero, "division by zero during evaluation");
      n = n / d.pow(f.exp);
    }
    return n;
  }

  Number poly(const Poly& p) {
    Number acc(0);
    for (const auto& t : p.terms()) {
      Number term(t.coef);
      for (const auto& pw : t.mono.powers()) term = term * atom(*pw.atom).pow(pw.exp);
      acc = acc + term;
    }
    return acc;
  }

 private:
  Number atom(const Atom& a) {
    auto it = cache_.find(&a);
    if (it != cache_.end()) return it->second;
    Number out;
    if (!a.is_function) {
      auto v = val_.find(a.var);
      if (v == val_.end()) throw EvalError(EvalError::Kind::UnboundVariable, "unbound variable " + a.var.to_string());
      out = v->second;
    } else {
      out = Number(apply_function(a.func, rf(*a.arg).to_double()));
    }
    cache_.emplace(&a, out);
    return out;
  }

  const Valuation& val_;
  std::unordered_map<const Atom*, Number> cache_;
};

}  // namespace

Number eval(const Expr& e, const Valuation& v) {
  Evaluator ev(v);
  return ev.rf(e.rf());
}

double eval_double(const Expr& e, const std::map<Var, double>& v) {
  Valuation val;
  for (const auto& [k, x] : v) val.emplace(k, Number(x));
  return eval(e, val).to_double();
}

// ---------------------------------------------------------------------------
// Zero testing

const char* to_string(ZeroStatus z) {
  switch (z) {
    case ZeroStatus::ProvablyZero:
      return "provably-zero";
    case ZeroStatus::ProvablyNonzero:
      return "provably-nonzero";
    case ZeroStatus::Unknown:
      return "unknown";
  }
  return "?";
}

ZeroStatus is_zero(const Expr& e, const ZeroTestOptions& opts) {
  const RatFunc& r = e.rf();
  if (r.is_zero()) return ZeroStatus::ProvablyZero;
  if (!rf_has_function(r)) return ZeroStatus::ProvablyNonzero;

  auto vars = free_vars(e);
  SampleRng rng(opts.seed);
  int ok = 0;
  int failures = 0;
  while (ok < opts.samples && failures <= opts.max_retries) {
    Valuation val;
    for (const auto& v : vars) val.emplace(v, Number(random_rational(rng)));
    try {
      Evaluator ev(val);
      // Denominator factors must not vanish at the sample.
      for (const auto& f : r.den()) {
        if (ev.poly(f.poly).is_zero()) throw EvalError(EvalError::Kind::DivisionByZero, "singular sample");
      }
      double value = 0.0;
      double scale = 0.0;
      bool exact_nonzero = false;
      for (const auto& t : r.num().terms()) {
        Number term(t.coef);
        for (const auto& pw : t.mono.powers()) {
          Poly single(Monomial(pw.atom));
          term = term * ev.poly(single).pow(pw.exp);
        }
        double d = term.to_double();
        if (!std::isfinite(d)) throw EvalError(EvalError::Kind::Domain, "non-finite sample");
        value += d;
        scale += std::fabs(d);
        (void)exact_nonzero;
      }
      ++ok;
      if (std::fabs(value) > opts.tolerance * std::max(1.0, scale)) return ZeroStatus::ProvablyNonzero;
    } catch (const EvalError&) {
      ++failures;
    }
  }
  return ZeroStatus::Unknown;
}

// ---------------------------------------------------------------------------
// Compiled evaluation

struct CompiledExpr::Node {
  struct AtomSlot {
    int var_slot = -1;
    FuncKind func = FuncKind::Sin;
    std::shared_ptr<const Node> arg;
  };
  struct CTerm {
    double coef;
    std::vector<std::pair<int, int>> powers;  // (atom index, exponent)
  };
  std::vector<AtomSlot> atoms;
  std::vector<CTerm> num;
  std::vector<std::pair<std::vector<CTerm>, int>> den;

  double eval(const double* args) const {
    double local[64];
    std::vector<double> heap;
    double* av = local;
    if (atoms.size() > 64) {
      heap.resize(atoms.size());
      av = heap.data();
    }
    for (std::size_t i = 0; i < atoms.size(); ++i) {
      const auto& a = atoms[i];
      av[i] = a.var_slot >= 0 ? args[a.var_slot] : apply_function(a.func, a.arg->eval(args));
    }
    double n = poly(num, av);
    for (const auto& [terms, e] : den) {
      double d = poly(terms, av);
      if (d == 0.0) throw EvalError(EvalError::Kind::DivisionByZero, "division by zero during evaluation");
      n /= std::pow(d, e);
    }
    return n;
  }

  static double poly(const std::vector<CTerm>& terms, const double* av) {
    double s = 0.0;
    for (const auto& t : terms) {
      double x = t.coef;
      for (const auto& [i, e] : t.powers) {
        double b = av[i];
        switch (e) {
          case 1:
            x *= b;
            break;
          case 2:
            x *= b * b;
            break;
          default:
            x *= std::pow(b, e);
        }
      }
      s += x;
    }
    return s;
  }
};

namespace {

class Compiler {
 public:
  explicit Compiler(const std::vector<Var>& slots) : slots_(slots) {}

  std::shared_ptr<const CompiledExpr::Node> compile(const RatFunc& r) {
    auto node = std::make_shared<CompiledExpr::Node>();
    std::unordered_map<const Atom*, int> index;
    auto terms = [&](const Poly& p) {
      std::vector<CompiledExpr::Node::CTerm> out;
      for (const auto& t : p.terms()) {
        CompiledExpr::Node::CTerm ct{to_double(t.coef), {}};
        for (const auto& pw : t.mono.powers()) ct.powers.emplace_back(atom_index(*node, index, pw.atom), pw.exp);
        out.push_back(std::move(ct));
      }
      return out;
    };
    node->num = terms(r.num());
    for (const auto& f : r.den()) node->den.emplace_back(terms(f.poly), f.exp);
    return node;
  }

 private:
  int atom_index(CompiledExpr::Node& node, std::unordered_map<const Atom*, int>& index, const AtomPtr& a) {
    auto it = index.find(a.get());
    if (it != index.end()) return it->second;
    CompiledExpr::Node::AtomSlot slot;
    if (!a->is_function) {
      auto s = std::find(slots_.begin(), slots_.end(), a->var);
      if (s == slots_.end()) {
        throw EvalError(EvalError::Kind::UnboundVariable, "no slot for variable " + a->var.to_string());
      }
      slot.var_slot = static_cast<int>(s - slots_.begin());
    } else {
      slot.func = a->func;
      slot.arg = compile(*a->arg);
    }
    node.atoms.push_back(std::move(slot));
    int i = static_cast<int>(node.atoms.size()) - 1;
    index.emplace(a.get(), i);
    return i;
  }

  const std::vector<Var>& slots_;
};

}  // namespace

CompiledExpr::CompiledExpr(const Expr& e, const std::vector<Var>& slots) {
  Compiler c(slots);
  root_ = c.compile(e.rf());
}

double CompiledExpr::operator()(const double* args) const { return root_ ? root_->eval(args) : 0.0; }

}  // namespace lbjet
