#include "lbjet/poly.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace lbjet {

double to_double(const Rational& q) {
  if (sgn(q) == 0) return 0.0;
  mpz_class a = abs(q.get_num());
  mpz_class b = q.get_den();
  // Scale so the integer quotient carries 55 or 56 bits, then round to 53.
  long shift = 55 - (static_cast<long>(mpz_sizeinbase(a.get_mpz_t(), 2)) -
                     static_cast<long>(mpz_sizeinbase(b.get_mpz_t(), 2)));
  if (shift > 0) {
    a <<= static_cast<mp_bitcnt_t>(shift);
  } else {
    b <<= static_cast<mp_bitcnt_t>(-shift);
  }
  mpz_class r;
  mpz_class quo;
  mpz_tdiv_qr(quo.get_mpz_t(), r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  long extra = static_cast<long>(mpz_sizeinbase(quo.get_mpz_t(), 2)) - 53;
  mpz_class low = quo & ((mpz_class(1) << static_cast<mp_bitcnt_t>(extra)) - 1);
  mpz_class half = mpz_class(1) << static_cast<mp_bitcnt_t>(extra - 1);
  quo >>= static_cast<mp_bitcnt_t>(extra);
  bool sticky = r != 0;
  if (low > half || (low == half && (sticky || mpz_odd_p(quo.get_mpz_t())))) quo += 1;
  double d = std::ldexp(quo.get_d(), static_cast<int>(extra - shift));
  return sgn(q) < 0 ? -d : d;
}

// ---------------------------------------------------------------------------
// Var / Atom

Var Var::base(int i) {
  Var v;
  v.kind = Kind::Base;
  v.index = i;
  return v;
}

Var Var::jet(int component, MultiIndex alpha) {
  Var v;
  v.kind = Kind::Jet;
  v.index = component;
  v.alpha = std::move(alpha);
  return v;
}

Var Var::symbol(std::string name) {
  Var v;
  v.kind = Kind::Symbol;
  v.index = 0;
  v.name = std::move(name);
  return v;
}

std::string Var::to_string() const {
  switch (kind) {
    case Kind::Base:
      return "x" + std::to_string(index);
    case Kind::Jet: {
      std::string s = "u" + std::to_string(index) + "[";
      for (std::size_t i = 0; i < alpha.dim(); ++i) {
        if (i) s += ",";
        s += std::to_string(alpha[i]);
      }
      return s + "]";
    }
    case Kind::Symbol:
      return name;
  }
  return "?";
}

bool operator==(const Var& a, const Var& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Var::Kind::Base:
      return a.index == b.index;
    case Var::Kind::Jet:
      return a.index == b.index && a.alpha == b.alpha;
    case Var::Kind::Symbol:
      return a.name == b.name;
  }
  return false;
}

std::strong_ordering operator<=>(const Var& a, const Var& b) {
  if (a.kind != b.kind) return static_cast<int>(a.kind) <=> static_cast<int>(b.kind);
  switch (a.kind) {
    case Var::Kind::Base:
      return a.index <=> b.index;
    case Var::Kind::Jet:
      if (a.index != b.index) return a.index <=> b.index;
      return a.alpha <=> b.alpha;
    case Var::Kind::Symbol:
      return a.name.compare(b.name) <=> 0;
  }
  return std::strong_ordering::equal;
}

const char* func_name(FuncKind f) {
  switch (f) {
    case FuncKind::Sin:
      return "sin";
    case FuncKind::Cos:
      return "cos";
    case FuncKind::Exp:
      return "exp";
    case FuncKind::Ln:
      return "ln";
    case FuncKind::Sqrt:
      return "sqrt";
  }
  return "?";
}

AtomPtr make_var_atom(const Var& v) {
  auto a = std::make_shared<Atom>();
  a->var = v;
  return a;
}

AtomPtr make_func_atom(FuncKind f, RatFunc arg) {
  auto a = std::make_shared<Atom>();
  a->is_function = true;
  a->func = f;
  a->arg = std::make_shared<const RatFunc>(std::move(arg));
  return a;
}

int compare_atoms(const Atom& a, const Atom& b) {
  if (&a == &b) return 0;
  if (a.is_function != b.is_function) return a.is_function ? 1 : -1;
  if (!a.is_function) {
    auto c = a.var <=> b.var;
    return c < 0 ? -1 : (c > 0 ? 1 : 0);
  }
  if (a.func != b.func) return static_cast<int>(a.func) < static_cast<int>(b.func) ? -1 : 1;
  return compare_ratfuncs(*a.arg, *b.arg);
}

// ---------------------------------------------------------------------------
// Monomial

Monomial::Monomial(AtomPtr a, int exp) {
  if (exp > 0) {
    p_.push_back(Power{std::move(a), exp});
    degree_ = exp;
  }
}

Monomial Monomial::from_powers(std::vector<Power> powers) {
  std::sort(powers.begin(), powers.end(),
            [](const Power& x, const Power& y) { return compare_atoms(*x.atom, *y.atom) < 0; });
  Monomial m;
  for (auto& p : powers) {
    if (p.exp == 0) continue;
    if (!m.p_.empty() && compare_atoms(*m.p_.back().atom, *p.atom) == 0) {
      m.p_.back().exp += p.exp;
    } else {
      m.p_.push_back(std::move(p));
    }
  }
  m.degree_ = 0;
  for (const auto& p : m.p_) m.degree_ += p.exp;
  return m;
}

int Monomial::exponent_of(const Atom& a) const {
  for (const auto& p : p_) {
    if (compare_atoms(*p.atom, a) == 0) return p.exp;
  }
  return 0;
}

Monomial Monomial::operator*(const Monomial& o) const {
  Monomial r;
  r.p_.reserve(p_.size() + o.p_.size());
  std::size_t i = 0, j = 0;
  while (i < p_.size() && j < o.p_.size()) {
    int c = compare_atoms(*p_[i].atom, *o.p_[j].atom);
    if (c < 0) {
      r.p_.push_back(p_[i++]);
    } else if (c > 0) {
      r.p_.push_back(o.p_[j++]);
    } else {
      r.p_.push_back(Power{p_[i].atom, p_[i].exp + o.p_[j].exp});
      ++i;
      ++j;
    }
  }
  while (i < p_.size()) r.p_.push_back(p_[i++]);
  while (j < o.p_.size()) r.p_.push_back(o.p_[j++]);
  r.degree_ = degree_ + o.degree_;
  return r;
}

bool Monomial::divides(const Monomial& o) const {
  if (degree_ > o.degree_) return false;
  std::size_t j = 0;
  for (const auto& p : p_) {
    while (j < o.p_.size() && compare_atoms(*o.p_[j].atom, *p.atom) < 0) ++j;
    if (j == o.p_.size() || compare_atoms(*o.p_[j].atom, *p.atom) != 0 || o.p_[j].exp < p.exp) return false;
    ++j;
  }
  return true;
}

Monomial Monomial::quotient(const Monomial& o) const {
  Monomial r;
  std::size_t j = 0;
  for (const auto& p : p_) {
    if (j < o.p_.size() && compare_atoms(*o.p_[j].atom, *p.atom) == 0) {
      int e = p.exp - o.p_[j].exp;
      if (e < 0) throw std::logic_error("monomial quotient is not exact");
      if (e > 0) r.p_.push_back(Power{p.atom, e});
      ++j;
    } else {
      r.p_.push_back(p);
    }
  }
  if (j != o.p_.size()) throw std::logic_error("monomial quotient is not exact");
  r.degree_ = degree_ - o.degree_;
  return r;
}

Monomial Monomial::gcd(const Monomial& o) const {
  Monomial r;
  std::size_t i = 0, j = 0;
  while (i < p_.size() && j < o.p_.size()) {
    int c = compare_atoms(*p_[i].atom, *o.p_[j].atom);
    if (c < 0) {
      ++i;
    } else if (c > 0) {
      ++j;
    } else {
      int e = std::min(p_[i].exp, o.p_[j].exp);
      r.p_.push_back(Power{p_[i].atom, e});
      r.degree_ += e;
      ++i;
      ++j;
    }
  }
  return r;
}

Monomial Monomial::without(const Atom& a, int* exp_out) const {
  Monomial r;
  *exp_out = 0;
  for (const auto& p : p_) {
    if (*exp_out == 0 && compare_atoms(*p.atom, a) == 0) {
      *exp_out = p.exp;
      continue;
    }
    r.p_.push_back(p);
    r.degree_ += p.exp;
  }
  return r;
}

int compare_monomials(const Monomial& a, const Monomial& b) {
  if (a.degree() != b.degree()) return a.degree() < b.degree() ? -1 : 1;
  const auto& pa = a.powers();
  const auto& pb = b.powers();
  std::size_t n = std::min(pa.size(), pb.size());
  for (std::size_t i = 0; i < n; ++i) {
    int c = compare_atoms(*pa[i].atom, *pb[i].atom);
    // The earlier atom has higher priority: owning it makes the monomial larger.
    if (c < 0) return 1;
    if (c > 0) return -1;
    if (pa[i].exp != pb[i].exp) return pa[i].exp < pb[i].exp ? -1 : 1;
  }
  if (pa.size() != pb.size()) return pa.size() < pb.size() ? -1 : 1;
  return 0;
}

// ---------------------------------------------------------------------------
// Poly

Poly::Poly(Rational c) {
  if (sgn(c) != 0) t_.push_back(Term{Monomial{}, std::move(c)});
}

Poly::Poly(Monomial m, Rational c) {
  if (sgn(c) != 0) t_.push_back(Term{std::move(m), std::move(c)});
}

Poly Poly::from_terms(std::vector<Term> terms) {
  std::sort(terms.begin(), terms.end(),
            [](const Term& a, const Term& b) { return compare_monomials(a.mono, b.mono) > 0; });
  Poly p;
  for (auto& t : terms) {
    if (!p.t_.empty() && compare_monomials(p.t_.back().mono, t.mono) == 0) {
      p.t_.back().coef += t.coef;
      if (sgn(p.t_.back().coef) == 0) p.t_.pop_back();
    } else if (sgn(t.coef) != 0) {
      p.t_.push_back(std::move(t));
    }
  }
  return p;
}

Rational Poly::constant_value() const {
  if (t_.empty()) return 0;
  if (!is_constant()) throw std::logic_error("polynomial is not constant");
  return t_[0].coef;
}

Poly Poly::operator+(const Poly& o) const {
  Poly r;
  r.t_.reserve(t_.size() + o.t_.size());
  std::size_t i = 0, j = 0;
  while (i < t_.size() && j < o.t_.size()) {
    int c = compare_monomials(t_[i].mono, o.t_[j].mono);
    if (c > 0) {
      r.t_.push_back(t_[i++]);
    } else if (c < 0) {
      r.t_.push_back(o.t_[j++]);
    } else {
      Rational s = t_[i].coef + o.t_[j].coef;
      if (sgn(s) != 0) r.t_.push_back(Term{t_[i].mono, std::move(s)});
      ++i;
      ++j;
    }
  }
  while (i < t_.size()) r.t_.push_back(t_[i++]);
  while (j < o.t_.size()) r.t_.push_back(o.t_[j++]);
  return r;
}

Poly Poly::operator-() const {
  Poly r(*this);
  for (auto& t : r.t_) t.coef = -t.coef;
  return r;
}

Poly Poly::operator-(const Poly& o) const { return *this + (-o); }

Poly Poly::operator*(const Poly& o) const {
  if (t_.empty() || o.t_.empty()) return Poly{};
  if (o.t_.size() == 1) return times(o.t_[0].mono, o.t_[0].coef);
  if (t_.size() == 1) return o.times(t_[0].mono, t_[0].coef);
  std::vector<Term> prod;
  prod.reserve(t_.size() * o.t_.size());
  for (const auto& a : t_) {
    for (const auto& b : o.t_) prod.push_back(Term{a.mono * b.mono, a.coef * b.coef});
  }
  return from_terms(std::move(prod));
}

Poly Poly::scaled(const Rational& c) const {
  if (sgn(c) == 0) return Poly{};
  Poly r(*this);
  for (auto& t : r.t_) t.coef *= c;
  return r;
}

Poly Poly::times(const Monomial& m, const Rational& c) const {
  if (sgn(c) == 0) return Poly{};
  Poly r;
  r.t_.reserve(t_.size());
  for (const auto& t : t_) r.t_.push_back(Term{t.mono * m, t.coef * c});
  return r;  // multiplying by a monomial preserves the order
}

Poly Poly::pow(int k) const {
  if (k < 0) throw std::invalid_argument("negative polynomial power");
  Poly result(Rational(1));
  Poly base = *this;
  while (k > 0) {
    if (k & 1) result = result * base;
    k >>= 1;
    if (k) base = base * base;
  }
  return result;
}

std::optional<Poly> Poly::divide_exact(const Poly& d) const {
  if (d.is_zero()) throw std::domain_error("polynomial division by zero");
  if (is_zero()) return Poly{};
  const Term& ld = d.leading();
  std::vector<Term> q;
  Poly r = *this;
  while (!r.is_zero()) {
    const Term& lr = r.leading();
    if (!ld.mono.divides(lr.mono)) return std::nullopt;
    Monomial m = lr.mono.quotient(ld.mono);
    Rational c = lr.coef / ld.coef;
    r = r - d.times(m, c);
    q.push_back(Term{std::move(m), std::move(c)});
  }
  return from_terms(std::move(q));
}

Monomial Poly::monomial_content() const {
  if (t_.empty()) return Monomial{};
  Monomial g = t_[0].mono;
  for (std::size_t i = 1; i < t_.size() && !g.is_one(); ++i) g = g.gcd(t_[i].mono);
  return g;
}

bool operator==(const Poly& a, const Poly& b) { return compare_polys(a, b) == 0; }

int compare_polys(const Poly& a, const Poly& b) {
  const auto& ta = a.terms();
  const auto& tb = b.terms();
  std::size_t n = std::min(ta.size(), tb.size());
  for (std::size_t i = 0; i < n; ++i) {
    int c = compare_monomials(ta[i].mono, tb[i].mono);
    if (c != 0) return c;
    int cc = cmp(ta[i].coef, tb[i].coef);
    if (cc != 0) return cc < 0 ? -1 : 1;
  }
  if (ta.size() != tb.size()) return ta.size() < tb.size() ? -1 : 1;
  return 0;
}

// ---------------------------------------------------------------------------
// RatFunc

namespace {

void sort_factors(std::vector<DenFactor>& den) {
  std::sort(den.begin(), den.end(),
            [](const DenFactor& a, const DenFactor& b) { return compare_polys(a.poly, b.poly) < 0; });
}

// Existing factors carry no monomial content, so an atom can only merge with itself.
void add_atom_factor(std::vector<DenFactor>& den, const AtomPtr& atom, int exp) {
  Poly a{Monomial(atom)};
  for (auto& f : den) {
    if (f.poly == a) {
      f.exp += exp;
      return;
    }
  }
  den.push_back(DenFactor{std::move(a), exp});
  sort_factors(den);
}

// Adds poly^exp to a factor list. Returns the constant c^exp that the caller must
// divide the numerator by (monic normalization pulls the leading coefficient out).
Rational insert_factor(std::vector<DenFactor>& den, Poly p, int exp) {
  if (p.is_zero()) throw std::domain_error("division by zero");
  Rational scale = 1;
  if (p.is_constant()) {
    Rational c = p.constant_value();
    for (int i = 0; i < exp; ++i) scale *= c;
    return scale;
  }
  Rational lc = p.leading().coef;
  if (lc != 1) {
    p = p.scaled(Rational(1) / lc);
    for (int i = 0; i < exp; ++i) scale *= lc;
  }
  Monomial content = p.monomial_content();
  if (!content.is_one()) {
    p = *p.divide_exact(Poly(content));
    for (const auto& pw : content.powers()) add_atom_factor(den, pw.atom, pw.exp * exp);
    if (p.is_constant()) return scale;
  }
  for (auto& f : den) {
    while (!p.is_constant()) {
      if (f.poly == p) {
        f.exp += exp;
        return scale;
      }
      auto q = p.divide_exact(f.poly);
      if (!q) break;
      p = std::move(*q);
      f.exp += exp;
    }
    if (p.is_constant()) return scale;
  }
  den.push_back(DenFactor{std::move(p), exp});
  sort_factors(den);
  return scale;
}

Poly expand(const std::vector<DenFactor>& den) {
  Poly r(Rational(1));
  for (const auto& f : den) r = r * f.poly.pow(f.exp);
  return r;
}

}  // namespace

RatFunc::RatFunc(Poly num, std::vector<DenFactor> den) : num_(std::move(num)) {
  Rational scale = 1;
  for (auto& f : den) scale *= insert_factor(den_, std::move(f.poly), f.exp);
  if (scale != 1) num_ = num_.scaled(Rational(1) / scale);
  cancel();
}

RatFunc RatFunc::var(const Var& v) { return RatFunc(Poly(Monomial(make_var_atom(v)))); }

void RatFunc::cancel() {
  if (num_.is_zero()) {
    den_.clear();
    return;
  }
  for (auto& f : den_) {
    while (f.exp > 0) {
      auto q = num_.divide_exact(f.poly);
      if (!q) break;
      num_ = std::move(*q);
      --f.exp;
    }
  }
  den_.erase(std::remove_if(den_.begin(), den_.end(), [](const DenFactor& f) { return f.exp == 0; }),
             den_.end());
}

Poly RatFunc::den_poly() const { return expand(den_); }

namespace {

bool same_den(const std::vector<DenFactor>& a, const std::vector<DenFactor>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].exp != b[i].exp || !(a[i].poly == b[i].poly)) return false;
  }
  return true;
}

}  // namespace

RatFunc RatFunc::operator+(const RatFunc& o) const {
  if (o.is_zero()) return *this;
  if (is_zero()) return o;
  RatFunc r;
  if (same_den(den_, o.den_)) {
    r.num_ = num_ + o.num_;
    r.den_ = den_;
    r.cancel();
    return r;
  }
  // Least common multiple of the two factor lists (both sorted).
  std::vector<DenFactor> lcm;
  Poly ma(Rational(1)), mb(Rational(1));
  std::size_t i = 0, j = 0;
  while (i < den_.size() || j < o.den_.size()) {
    int c;
    if (i == den_.size()) {
      c = 1;
    } else if (j == o.den_.size()) {
      c = -1;
    } else {
      c = compare_polys(den_[i].poly, o.den_[j].poly);
    }
    if (c < 0) {
      lcm.push_back(den_[i]);
      mb = mb * den_[i].poly.pow(den_[i].exp);
      ++i;
    } else if (c > 0) {
      lcm.push_back(o.den_[j]);
      ma = ma * o.den_[j].poly.pow(o.den_[j].exp);
      ++j;
    } else {
      int e = std::max(den_[i].exp, o.den_[j].exp);
      lcm.push_back(DenFactor{den_[i].poly, e});
      if (e > den_[i].exp) ma = ma * den_[i].poly.pow(e - den_[i].exp);
      if (e > o.den_[j].exp) mb = mb * o.den_[j].poly.pow(e - o.den_[j].exp);
      ++i;
      ++j;
    }
  }
  r.num_ = num_ * ma + o.num_ * mb;
  r.den_ = std::move(lcm);
  r.cancel();
  return r;
}

RatFunc RatFunc::operator-() const {
  RatFunc r(*this);
  r.num_ = -r.num_;
  return r;
}

RatFunc RatFunc::operator-(const RatFunc& o) const { return *this + (-o); }

RatFunc RatFunc::operator*(const RatFunc& o) const {
  if (is_zero() || o.is_zero()) return RatFunc{};
  RatFunc r;
  r.num_ = num_ * o.num_;
  if (o.den_.empty()) {
    r.den_ = den_;
  } else if (den_.empty()) {
    r.den_ = o.den_;
  } else {
    std::size_t i = 0, j = 0;
    while (i < den_.size() || j < o.den_.size()) {
      int c;
      if (i == den_.size()) {
        c = 1;
      } else if (j == o.den_.size()) {
        c = -1;
      } else {
        c = compare_polys(den_[i].poly, o.den_[j].poly);
      }
      if (c < 0) {
        r.den_.push_back(den_[i++]);
      } else if (c > 0) {
        r.den_.push_back(o.den_[j++]);
      } else {
        r.den_.push_back(DenFactor{den_[i].poly, den_[i].exp + o.den_[j].exp});
        ++i;
        ++j;
      }
    }
  }
  r.cancel();
  return r;
}

RatFunc RatFunc::inverse() const {
  if (is_zero()) throw std::domain_error("division by zero");
  RatFunc r;
  r.num_ = expand(den_);
  Rational scale = insert_factor(r.den_, num_, 1);
  if (scale != 1) r.num_ = r.num_.scaled(Rational(1) / scale);
  r.cancel();
  return r;
}

RatFunc RatFunc::operator/(const RatFunc& o) const { return *this * o.inverse(); }

RatFunc RatFunc::pow(int k) const {
  if (k == 0) return RatFunc(Rational(1));
  if (k < 0) return inverse().pow(-k);
  RatFunc r;
  r.num_ = num_.pow(k);
  r.den_ = den_;
  for (auto& f : r.den_) f.exp *= k;
  return r;
}

bool operator==(const RatFunc& a, const RatFunc& b) { return compare_ratfuncs(a, b) == 0; }

int compare_ratfuncs(const RatFunc& a, const RatFunc& b) {
  if (int c = compare_polys(a.num(), b.num()); c != 0) return c;
  const auto& da = a.den();
  const auto& db = b.den();
  if (da.size() != db.size()) return da.size() < db.size() ? -1 : 1;
  for (std::size_t i = 0; i < da.size(); ++i) {
    if (int c = compare_polys(da[i].poly, db[i].poly); c != 0) return c;
    if (da[i].exp != db[i].exp) return da[i].exp < db[i].exp ? -1 : 1;
  }
  return 0;
}

}  // namespace lbjet
