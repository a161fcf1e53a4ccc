#include "lbjet/expo2_check.hpp"

#include <cmath>

#include "lbjet/truncation.hpp"

namespace lbjet {

namespace {

const Var kX = Var::base(1);
Var y0(int l) { return Var::jet(l, MultiIndex{0}); }
Var y1(int l) { return Var::jet(l, MultiIndex{1}); }
Var y2(int l) { return Var::jet(l, MultiIndex{2}); }

std::string idx(int a, int b) { return "[" + std::to_string(a) + "][" + std::to_string(b) + "]"; }

// Y^(k)_R for R = 1, 2, matched to the monomial y^{k+1}_R; absent monomials give zero fields.
std::array<FiniteField, 2> aux_fields(const ProlongedField& p, const PolynomialSplit& s) {
  auto ys = build_Yk(p, s);
  std::array<FiniteField, 2> out;
  for (auto& y : out) y = FiniteField{1, 2, s.k, {}};
  for (std::size_t l = 0; l < s.monomials.size(); ++l) {
    const auto& mono = s.monomials[l];
    if (mono.size() != 1 || mono[0].second != 1 || mono[0].first.jet_order() != s.k + 1) {
      throw std::logic_error("unexpected monomial " + to_string(mono) + " in the order-" + std::to_string(s.k) +
                             " truncation");
    }
    out[mono[0].first.index - 1] = ys[l];
  }
  return out;
}

Valuation to_valuation(const JetPoint& p) {
  Valuation v;
  for (const auto& [k, x] : p) v.emplace(k, Number(x));
  return v;
}

JetPoint random_point(SampleRng& rng) {
  return make_point(random_rational(rng), random_rational(rng), random_rational(rng), random_rational(rng),
                    random_rational(rng));
}

double magnitude(const Number& n) { return std::fabs(n.to_double()); }

}  // namespace

JetPoint make_point(const Rational& x, const Rational& y01, const Rational& y02, const Rational& y11,
                    const Rational& y12) {
  return JetPoint{{kX, x}, {y0(1), y01}, {y0(2), y02}, {y1(1), y11}, {y1(2), y12}};
}

void require_restricted(const LBField& f) {
  if (f.n != 1 || f.m != 2) throw SignatureError("expo2 checks need n = 1 and m = 2");
  if (f.order() >= 2) throw SignatureError("expo2 checks need principal components free of jets of order >= 2");
}

StructureMatrices structure_matrices(const LBField& f) {
  require_restricted(f);
  const Expr& xi = f.xi[0];
  StructureMatrices s;
  for (int l = 1; l <= 2; ++l) {
    const Expr& eta = f.eta0[l - 1];
    Expr yl = Expr::var(y1(l));
    s.O[l - 1] = diff(eta, kX) - yl * diff(xi, kX);
    for (int q = 1; q <= 2; ++q) {
      s.N[l - 1][q - 1] = diff(eta, y0(q)) - yl * diff(xi, y0(q));
      s.M[l - 1][q - 1] = diff(eta, y1(q)) - yl * diff(xi, y1(q));
    }
  }

  // Q from the bracket [X^(1), Y^(1)_R]: its d/dy^1_M coefficient is Q^R_M.
  ProlongedField p = prolong(f, 1);
  PolynomialSplit sp = split(f, p, 1);
  FiniteField x1 = build_Xk(p, sp);
  auto ys = aux_fields(p, sp);
  for (int r = 1; r <= 2; ++r) {
    FiniteField b = lie_bracket(x1, ys[r - 1]);
    for (int m = 1; m <= 2; ++m) s.Q[m - 1][r - 1] = b.at(y1(m));
  }

  // Closed formula:
  // Q^R_M = X1(M^R_M) - (M^R_N dO_M/dy^1_N + M^R_Q N^Q_M + M^R_N y^1_Q dN^Q_M/dy^1_N).
  for (int r = 1; r <= 2; ++r) {
    for (int m = 1; m <= 2; ++m) {
      const Expr& mrm = s.M[m - 1][r - 1];
      Expr q = x1.apply(mrm);
      for (int n = 1; n <= 2; ++n) {
        const Expr& mrn = s.M[n - 1][r - 1];
        q -= mrn * diff(s.O[m - 1], y1(n));
        q -= mrn * s.N[m - 1][n - 1];
        for (int qq = 1; qq <= 2; ++qq) q -= mrn * Expr::var(y1(qq)) * diff(s.N[m - 1][qq - 1], y1(n));
      }
      s.Q_formula[m - 1][r - 1] = q;
    }
  }
  return s;
}

Mat2<Rational> factor_B(const Mat2<Rational>& A, const Mat2<Rational>& M) {
  return factor_B<Rational>(A, M, [](const Rational& q) { return sgn(q) == 0; });
}

Mat2<Expr> factor_B(const Mat2<Expr>& A, const Mat2<Expr>& M) {
  return factor_B<Expr>(A, M, [](const Expr& e) { return is_zero(e) == ZeroStatus::ProvablyZero; });
}

std::array<CheckEntry, 2> theorem6_conditions(const LBField& f, const StructureMatrices& s, const Expo2Options& opts) {
  require_restricted(f);
  const std::array<const char*, 3> fnames{"xi", "eta0_1", "eta0_2"};
  std::array<Expr, 3> fs{f.xi[0], f.eta0[0], f.eta0[1]};
  // grads[F][M] = dF/dy^1_M
  std::array<std::array<Expr, 2>, 3> grads;
  for (int a = 0; a < 3; ++a) {
    for (int m = 1; m <= 2; ++m) grads[a][m - 1] = diff(fs[a], y1(m));
  }

  std::array<CheckEntry, 2> out;
  for (int c = 0; c < 2; ++c) {
    const Mat2<Expr>& C = c == 0 ? s.M : s.Q;
    CheckEntry& e = out[c];
    e.name = c == 0 ? "theorem6_i" : "theorem6_ii";
    const char* cname = c == 0 ? "M" : "Q";

    struct Item {
      std::string label;
      std::array<Expr, 2> a, b;
      ZeroStatus z;
    };
    std::vector<Item> items;
    for (int r = 1; r <= 2; ++r) {
      for (int a = 0; a < 3; ++a) {
        Item it;
        it.label = std::string(cname) + "^" + std::to_string(r) + "_M d" + fnames[a] + "/dy1_M";
        for (int m = 0; m < 2; ++m) {
          it.a[m] = C[m][r - 1];
          it.b[m] = grads[a][m];
        }
        it.z = is_zero(it.a[0] * it.b[0] + it.a[1] * it.b[1], opts.zero);
        items.push_back(std::move(it));
      }
    }

    // Sampled residuals at rational points, relative to the size of the summands.
    SampleRng rng(opts.seed + static_cast<std::uint64_t>(c));
    int taken = 0, attempts = 0;
    double worst = 0.0;
    while (taken < opts.samples && attempts < 20 * opts.samples) {
      ++attempts;
      Valuation v = to_valuation(random_point(rng));
      std::vector<double> res;
      try {
        for (const auto& it : items) {
          Number t0 = eval(it.a[0], v) * eval(it.b[0], v);
          Number t1 = eval(it.a[1], v) * eval(it.b[1], v);
          Number sum = t0 + t1;
          double scale = std::max(1.0, magnitude(t0) + magnitude(t1));
          res.push_back(sum.is_exact() && sgn(sum.exact()) == 0 ? 0.0 : magnitude(sum) / scale);
        }
      } catch (const EvalError&) {
        continue;
      }
      ++taken;
      for (double r : res) worst = std::max(worst, r);
    }
    e.residual = worst;
    e.details.push_back("sampled " + std::to_string(taken) + " rational points");

    bool any_nonzero = false, any_unknown = false;
    for (const auto& it : items) {
      if (it.z == ZeroStatus::ProvablyNonzero) {
        if (!any_nonzero) e.witness = it.label;
        any_nonzero = true;
        e.details.push_back(it.label + " = " + (it.a[0] * it.b[0] + it.a[1] * it.b[1]).to_string());
      } else if (it.z == ZeroStatus::Unknown) {
        any_unknown = true;
        if (e.witness.empty()) e.witness = it.label;
      }
    }
    if (any_nonzero) {
      e.verdict = Verdict::Fail;
    } else if (any_unknown) {
      e.mode = ProofMode::Sampled;
      e.verdict = taken > 0 && worst < opts.tol ? Verdict::Pass : Verdict::Unknown;
    }
  }
  return out;
}

CheckEntry q_formula_crosscheck(const StructureMatrices& s, const ZeroTestOptions& opts) {
  ZeroTally t("q_formula_crosscheck", opts);
  for (int m = 0; m < 2; ++m) {
    for (int r = 0; r < 2; ++r) t.expect_zero(s.Q[m][r] - s.Q_formula[m][r], "Q" + idx(m + 1, r + 1));
  }
  return t.take();
}

NilpotencyResult nilpotency_check(const StructureMatrices& s, const JetPoint& p, const ZeroTestOptions& opts) {
  NilpotencyResult r;
  r.M2 = mat_mul(s.M, s.M);
  ZeroTally t("m_squared_zero", opts);
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) t.expect_zero(r.M2[i][j], "M^2" + idx(i + 1, j + 1));
  }
  r.square_zero = t.take();

  CheckEntry& nz = r.nonzero_at;
  nz.name = "m_nonzero_at_point";
  nz.verdict = Verdict::Fail;
  Valuation v = to_valuation(p);
  try {
    for (int i = 0; i < 2 && nz.verdict != Verdict::Pass; ++i) {
      for (int j = 0; j < 2; ++j) {
        Number x = eval(s.M[i][j], v);
        bool nonzero = x.is_exact() ? sgn(x.exact()) != 0 : std::fabs(x.to_double()) > 1e-9;
        if (nonzero) {
          nz.verdict = Verdict::Pass;
          nz.witness = "M" + idx(i + 1, j + 1) + " = " + x.to_string();
          nz.residual = std::fabs(x.to_double());
          if (!x.is_exact()) nz.mode = ProofMode::Sampled;
          break;
        }
      }
    }
    if (nz.verdict == Verdict::Fail) nz.witness = "M vanishes at the point";
  } catch (const EvalError& e) {
    nz.verdict = Verdict::Unknown;
    nz.witness = std::string("M is singular at the point: ") + e.what();
  }
  return r;
}

ClosureResult module_closure(const LBField& f, const StructureMatrices& s, const Expo2Options& opts) {
  auto conds = theorem6_conditions(f, s, opts);
  for (const auto& c : conds) {
    if (c.verdict != Verdict::Pass) throw PreconditionError("module_closure: " + c.name + " does not pass");
  }
  ClosureResult out;
  CheckEntry& e = out.entry;
  e.name = "module_closure";

  ProlongedField p = prolong(f, 2);
  PolynomialSplit sp = split(f, p, 2);
  if (sp.nu() == 0) {
    e.details.push_back("no auxiliary fields; closure holds vacuously");
    return out;
  }
  FiniteField x2 = build_Xk(p, sp);
  auto ys = aux_fields(p, sp);

  ZeroTally low("closure_low_blocks", opts.zero);
  Mat2<Expr> C;  // C[R][P]: d/dy^2_P coefficient of [X^(2), Y^(2)_R]
  for (int r = 1; r <= 2; ++r) {
    FiniteField b = lie_bracket(x2, ys[r - 1]);
    std::string tag = "[X2,Y2_" + std::to_string(r) + "] ";
    low.expect_zero(b.at(kX), tag + "d/dx");
    for (int l = 1; l <= 2; ++l) {
      low.expect_zero(b.at(y0(l)), tag + "d/dy0_" + std::to_string(l));
      low.expect_zero(b.at(y1(l)), tag + "d/dy1_" + std::to_string(l));
      C[r - 1][l - 1] = b.at(y2(l));
    }
  }
  CheckEntry lowe = low.take();
  if (lowe.verdict != Verdict::Pass) {
    e.verdict = lowe.verdict;
    e.mode = lowe.mode;
    e.witness = lowe.witness;
    e.details = lowe.details;
    return out;
  }

  // Y^(2)_N = M^N_P d/dy^2_P, so the generator matrix is M transposed.
  Mat2<Expr> G = transpose(s.M);
  try {
    Mat2<Expr> A = factor_B(C, G);
    ZeroTally fac("closure_factorization", opts.zero);
    Mat2<Expr> AG = mat_mul(A, G);
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) fac.expect_zero(AG[i][j] - C[i][j], "(A M - C)" + idx(i + 1, j + 1));
    }
    CheckEntry fe = fac.take();
    if (fe.verdict != Verdict::Pass) {
      e.verdict = fe.verdict;
      e.witness = fe.witness;
      e.details = fe.details;
      return out;
    }
    out.A = A;
  } catch (const FactorError& err) {
    e.verdict = Verdict::Fail;
    e.witness = "hypothesis " + err.hypothesis() + " fails symbolically";
    return out;
  }

  // Exact re-factorization at rational sample points.
  SampleRng rng(opts.seed + 7);
  int taken = 0, attempts = 0;
  int want = std::min(opts.samples, 20);
  while (taken < want && attempts < 50 * want) {
    ++attempts;
    Valuation v = to_valuation(random_point(rng));
    for (int l = 1; l <= 2; ++l) v.emplace(y2(l), Number(random_rational(rng)));
    Mat2<Rational> Cp, Gp;
    try {
      bool exact = true;
      for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
          Number c = eval(C[i][j], v), g = eval(G[i][j], v);
          if (!c.is_exact() || !g.is_exact()) exact = false;
          if (exact) {
            Cp[i][j] = c.exact();
            Gp[i][j] = g.exact();
          }
        }
      }
      if (!exact) {
        e.details.push_back("entries are not rational; pointwise factorization skipped");
        break;
      }
    } catch (const EvalError&) {
      continue;
    }
    if (sgn(Gp[0][0]) == 0 && sgn(Gp[0][1]) == 0 && sgn(Gp[1][0]) == 0 && sgn(Gp[1][1]) == 0) continue;
    try {
      Mat2<Rational> Bp = factor_B(Cp, Gp);
      Mat2<Rational> R = mat_mul(Bp, Gp);
      for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
          if (R[i][j] != Cp[i][j]) {
            e.verdict = Verdict::Fail;
            e.witness = "pointwise A M != C at sample " + std::to_string(taken + 1);
            return out;
          }
        }
      }
    } catch (const FactorError& err) {
      e.verdict = Verdict::Fail;
      e.witness = "hypothesis " + err.hypothesis() + " fails at sample " + std::to_string(taken + 1);
      return out;
    }
    ++taken;
  }
  e.details.push_back("factored exactly at " + std::to_string(taken) + " rational points");
  if (taken == 0) e.details.push_back("no usable rational sample; closure rests on the symbolic factorization");
  for (int r = 0; r < 2; ++r) {
    for (int n = 0; n < 2; ++n) e.details.push_back("A" + idx(r + 1, n + 1) + " = " + (*out.A)[r][n].to_string());
  }
  return out;
}

const char* to_string(ExpoVerdict v) {
  switch (v) {
    case ExpoVerdict::ExponentiableAtPoint:
      return "exponentiable-at-point";
    case ExpoVerdict::Rejected:
      return "rejected";
    case ExpoVerdict::Inconclusive:
      return "inconclusive";
  }
  return "?";
}

std::vector<CheckEntry> ExpoReport::entries() const {
  std::vector<CheckEntry> out{cond_i, cond_ii, q_crosscheck, nilpotency.square_zero, nilpotency.nonzero_at};
  if (closure) {
    out.push_back(closure->entry);
  } else {
    CheckEntry c;
    c.name = "module_closure";
    c.verdict = Verdict::Skipped;
    c.witness = "contraction conditions not met";
    out.push_back(c);
  }
  return out;
}

ExpoReport expo2_check(const LBField& f, const JetPoint& p, const Expo2Options& opts) {
  ExpoReport r;
  r.s = structure_matrices(f);
  auto conds = theorem6_conditions(f, r.s, opts);
  r.cond_i = conds[0];
  r.cond_ii = conds[1];
  r.q_crosscheck = q_formula_crosscheck(r.s, opts.zero);
  r.nilpotency = nilpotency_check(r.s, p, opts.zero);

  if (r.cond_i.verdict == Verdict::Fail || r.cond_ii.verdict == Verdict::Fail ||
      r.nilpotency.square_zero.verdict == Verdict::Fail) {
    r.verdict = ExpoVerdict::Rejected;
    return r;
  }
  if (r.cond_i.passed() && r.cond_ii.passed()) r.closure = module_closure(f, r.s, opts);
  bool all = r.cond_i.passed() && r.cond_ii.passed() && r.nilpotency.square_zero.passed() &&
             r.nilpotency.nonzero_at.passed() && r.closure && r.closure->entry.passed();
  r.verdict = all ? ExpoVerdict::ExponentiableAtPoint : ExpoVerdict::Inconclusive;
  return r;
}

}  // namespace lbjet
