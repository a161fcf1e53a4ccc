// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <sstream>
#include <string>

#include "fixtures.hpp"
#include "lbjet/classifier.hpp"
#include "lbjet/expo2_check.hpp"
#include "lbjet/flow_engine.hpp"
#include "lbjet/truncation.hpp"
#include "lbjet_cli/commands.hpp"
#include "random_fields.hpp"

using namespace lbjet;
using fx::y;

namespace {

struct Outcome {
  bool ok = true;
  std::string note;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      note = what;
    }
  }
};

Var Y(int l, int k) { return Var::jet(l, MultiIndex{k}); }
Expr t() { return flow_time(); }
bool proven_zero(const Expr& e) { return is_zero(e) == ZeroStatus::ProvablyZero; }
bool symbolic_pass(const CheckEntry& e) { return e.verdict == Verdict::Pass && e.mode == ProofMode::Symbolic; }

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", v);
  return buf;
}

FlowMap symmetrized_flow() {
  Expr inc = Expr(Rational(1, 2)) * t() * (y(1, 2) - y(2, 2));
  return FlowMap(1, 2, {Expr::base(1)}, {y(1, 0) + inc, y(2, 0) + inc});
}

Outcome criterion1() {
  Outcome o;
  SampleRng rng(101);
  std::vector<LBField> fields{fx::symmetrized()};
  for (int i = 0; i < 5; ++i) {
    int m = 1 + i % 2;
    auto vars = gen::small_vars(m, 2);
    std::vector<Expr> eta;
    for (int l = 0; l < m; ++l) eta.push_back(gen::random_poly(rng, vars, 3, 2));
    fields.push_back(LBField::make(1, m, {gen::random_poly(rng, vars, 2, 2)}, eta));
  }
  for (std::size_t i = 0; i < fields.size(); ++i) {
    CheckEntry e = verify_lb_identity(prolong(fields[i], 4));
    o.require(symbolic_pass(e), "field " + std::to_string(i) + ": " + e.witness);
  }
  o.note = o.ok ? "6 fields, orders <= 4, all provably zero" : o.note;
  return o;
}

Outcome criterion2() {
  Outcome o;
  FlowMap flow = symmetrized_flow();
  for (int k = 0; k <= 5; ++k) {
    Expr inc = Expr(Rational(1, 2)) * t() * (y(1, k + 2) - y(2, k + 2));
    for (int l = 1; l <= 2; ++l) {
      o.require(flow.component(MultiPair{l, MultiIndex{k}}) == y(l, k) + inc,
                "H^" + std::to_string(k) + "_" + std::to_string(l) + " differs");
    }
  }
  o.require(symbolic_pass(verify_group_law_symbolic(flow, 5)), "group law");
  o.require(symbolic_pass(verify_eq2(flow, 5)), "contact relation");
  if (o.ok) o.note = "H^k exact for k <= 5; group law and contact relation provably zero";
  return o;
}

Outcome criterion3() {
  Outcome o;
  LBField f = fx::radial();
  StructureMatrices s = structure_matrices(f);
  Valuation at{{Y(1, 1), Number(Rational(1))}, {Y(2, 1), Number(Rational(2))}};
  const int want[2][2] = {{-2, 1}, {-4, 2}};
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      Number v = eval(s.M[i][j], at);
      o.require(v.is_exact() && v.exact() == want[i][j], "M entry " + std::to_string(i) + std::to_string(j));
    }
  }
  Mat2<Expr> m2 = mat_mul(s.M, s.M);
  for (const auto& row : m2) {
    for (const auto& e : row) o.require(proven_zero(e), "M^2 entry not provably zero");
  }
  auto conds = theorem6_conditions(f, s);
  o.require(symbolic_pass(conds[0]) && symbolic_pass(conds[1]), "contraction condition");
  H1Result h = h1_component(f);
  Expr z = y(2, 1) / y(1, 1);
  Expr moved = substitute(z, {{Y(1, 1), h.h1[0]}, {Y(2, 1), h.h1[1]}});
  o.require(proven_zero(moved - z), "z(H1) != z");
  if (o.ok) o.note = "M(1,2) = [[-2,1],[-4,2]], M^2 = 0, 12 contractions and z(H1) - z provably zero";
  return o;
}

Outcome criterion4() {
  Outcome o;
  LBField f = fx::affine();
  StructureMatrices s = structure_matrices(f);
  Expo2Options opts;
  opts.samples = 100;
  auto conds = theorem6_conditions(f, s, opts);
  double worst = std::max(conds[0].residual, conds[1].residual);
  o.require(conds[0].passed() && conds[1].passed() && worst < 1e-9, "contraction residual " + sci(worst));
  Mat2<Expr> m2 = mat_mul(s.M, s.M);
  for (const auto& row : m2) {
    for (const auto& e : row) o.require(proven_zero(e), "M^2 entry not provably zero");
  }
  FoliationField printed = build_affine_printed(1, leaf().pow(2) * Expr(Rational(1, 2)), leaf());
  bool printed_fails = is_zero(printed.ode_residual) == ZeroStatus::ProvablyNonzero;
  o.require(printed_fails, "printed variant satisfies the ODE");
  if (o.ok) {
    o.note = "contraction max residual " + sci(worst) + " at 100 points, M^2 = 0; printed variant ODE residual " +
             printed.ode_residual.to_string();
  }
  return o;
}

Outcome criterion5() {
  Outcome o;
  ExpoReport r = expo2_check(fx::square_field(), make_point(0, 0, 0, 1, 2));
  o.require(r.verdict == ExpoVerdict::Rejected, "square field not rejected");
  o.require(r.nilpotency.square_zero.verdict == Verdict::Fail && !r.nilpotency.square_zero.witness.empty(),
            "no M^2 witness");
  Expr d = y(1, 2) - y(2, 2);
  CheckEntry cyc = check_cycle_condition(dependency_graph({d, d}));
  o.require(cyc.verdict == Verdict::Fail, "symmetrized Phi passes the cycle condition");
  Theorem2Result t2 = check_theorem2(1, {y(2, 2), Expr(0)});
  o.require(t2.entry.passed() && t2.field.has_value(), "Phi = (y2'', 0) fails the converse criterion");
  if (o.ok) {
    o.note = "square rejected (" + r.nilpotency.square_zero.witness + "), cycle " + cyc.witness +
             ", converse criterion passes for (u2[2], 0)";
  }
  return o;
}

Outcome criterion6() {
  Outcome o;
  double worst = 0.0;
  const double times[][2] = {{0.1, 0.07}, {-0.1, 0.05}, {0.03, -0.1}};
  for (const auto& f : {fx::radial(), fx::affine()}) {
    FlowMap flow = closed_form_flow(f);
    for (const auto& ts : times) {
      FlowCheckOptions opts;
      opts.samples = 100;
      opts.t = ts[0];
      opts.s = ts[1];
      GroupLawResult g = verify_group_law_numeric(flow, opts);
      o.require(g.entry.passed(), "group law " + g.entry.witness);
      worst = std::max(worst, g.entry.residual);
    }
    FlowCheckOptions opts;
    opts.samples = 100;
    CheckEntry e2 = verify_eq2_numeric(flow, 2, opts);
    o.require(e2.passed() && e2.residual < 1e-9, "contact relation residual " + sci(e2.residual));
    worst = std::max(worst, e2.residual);
  }

  double rk_worst = 0.0;
  int compared = 0;
  for (const auto& f : {fx::radial(), fx::affine()}) {
    auto p = prolong(f, 2);
    FiniteField x2 = build_Xk(p, split(f, p, 2));
    FlowMap flow = closed_form_flow(f);
    SampleRng rng(7);
    for (int trial = 0; trial < 20; ++trial) {
      std::map<Var, double> pt;
      for (const auto& v : jet_coordinates(1, 2, 2)) pt[v] = uniform(rng, -1, 1);
      pt[Y(1, 1)] = uniform(rng, 0.5, 1.5);
      double tv = uniform(rng, -0.5, 0.5);
      std::map<Var, double> in = pt;
      in[flow_time_var()] = tv;
      std::map<Var, double> out;
      try {
        out = rk4_flow(x2, pt, tv, 1e-3);
      } catch (const EvalError&) {
        continue;
      }
      ++compared;
      auto cmp = [&](double a, double b) {
        rk_worst = std::max(rk_worst, std::fabs(a - b) / std::max(1.0, std::fabs(b)));
      };
      cmp(out[Var::base(1)], eval_double(flow.xi()[0], in));
      for (int l = 1; l <= 2; ++l) {
        for (int k = 0; k <= 1; ++k) cmp(out[Y(l, k)], eval_double(flow.component(MultiPair{l, MultiIndex{k}}), in));
      }
    }
  }
  o.require(compared >= 30, "only " + std::to_string(compared) + " RK4 runs completed");
  o.require(rk_worst < 1e-6, "RK4 deviation " + sci(rk_worst));
  if (o.ok) {
    o.note = "flow-law max residual " + sci(worst) + "; RK4 max deviation " + sci(rk_worst) + " over " +
             std::to_string(compared) + " runs";
  }
  return o;
}

Outcome criterion7() {
  Outcome o;
  SampleRng rng(77);
  int done = 0;
  while (done < 50) {
    Rational v1 = random_rational(rng, 20, 3), v2 = random_rational(rng, 20, 3), c = random_rational(rng, 20, 3);
    if (sgn(c) == 0 || (sgn(v1) == 0 && sgn(v2) == 0)) continue;
    // M = u v^T with v^T u = 0 is rank one and squares to zero.
    Rational u1 = -c * v2, u2 = c * v1;
    Mat2<Rational> M{{{u1 * v1, u1 * v2}, {u2 * v1, u2 * v2}}};
    Mat2<Rational> B0;
    for (auto& row : B0) {
      for (auto& e : row) e = random_rational(rng, 20, 3);
    }
    Mat2<Rational> A = mat_mul(B0, M);
    Mat2<Rational> B = factor_B(A, M);
    Mat2<Rational> BM = mat_mul(B, M);
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) o.require(A[i][j] == BM[i][j], "A - B M != 0 at instance " + std::to_string(done));
    }
    ++done;
  }
  if (o.ok) o.note = "50 instances, A - B M = 0 exactly";
  return o;
}

Outcome criterion8() {
  Outcome o;
  std::string pts;
  for (const auto& f : {fx::radial(), fx::affine()}) {
    StructureMatrices s = structure_matrices(f);
    ClosureResult c = module_closure(f, s);
    o.require(c.entry.passed() && c.A.has_value(), "closure: " + c.entry.witness);
    int taken = 0;
    for (const auto& d : c.entry.details) {
      if (std::sscanf(d.c_str(), "factored exactly at %d", &taken) == 1) break;
    }
    o.require(taken > 0, "no exact rational sample");
    pts += (pts.empty() ? "" : ", ") + std::to_string(taken);
  }
  if (o.ok) o.note = "low blocks provably zero; y2 block factored exactly at " + pts + " rational points";
  return o;
}

Outcome criterion9() {
  Outcome o;
  double worst = 0.0;
  Expr x = Expr::base(1);
  FlowMap translation = closed_form_flow(LBField::make(1, 2, {Expr(1)}, {Expr(0), Expr(0)}));
  const double windows[][3] = {{-1, 1, 0.3}, {0, 2, -0.25}, {-3, -1, 0.7}};
  for (const auto& w : windows) {
    GermFlowResult r = germ_flow(translation, {sin(x), x.pow(3) - x}, w[0], w[1], w[2], 41);
    o.require(r.invertible, "translation base map not invertible");
    for (std::size_t j = 0; j < r.x.size(); ++j) {
      double u = r.x[j] - w[2];
      worst = std::max({worst, std::fabs(r.ft[0][j] - std::sin(u)), std::fabs(r.ft[1][j] - (u * u * u - u))});
    }
  }
  // f1 = sin x, f2 = x^3/6: (f1 - f2)'' = -sin x - x.
  FlowMap sym = symmetrized_flow();
  for (const auto& w : windows) {
    GermFlowResult r = germ_flow(sym, {sin(x), x.pow(3) * Expr(Rational(1, 6))}, w[0], w[1], w[2], 41);
    for (std::size_t j = 0; j < r.x.size(); ++j) {
      double xv = r.x[j];
      double bump = 0.5 * w[2] * (-std::sin(xv) - xv);
      worst = std::max({worst, std::fabs(r.ft[0][j] - (std::sin(xv) + bump)),
                        std::fabs(r.ft[1][j] - (xv * xv * xv / 6 + bump))});
    }
  }
  o.require(worst < 1e-8, "germ deviation " + sci(worst));
  if (o.ok) o.note = "max deviation " + sci(worst) + " over 3 windows per field";
  return o;
}

Outcome criterion10() {
  Outcome o;
  namespace fs = std::filesystem;
  int files = 0;
  cli::GlobalOptions g;
  g.seed = 42;
  std::vector<fs::path> paths;
  for (const auto& e : fs::directory_iterator(LBJET_CORPUS_DIR)) paths.push_back(e.path());
  std::sort(paths.begin(), paths.end());
  for (const auto& p : paths) {
    std::string a = cli::cmd_check(p.string(), g).report.dump(2);
    std::string b = cli::cmd_check(p.string(), g).report.dump(2);
    o.require(a == b, p.filename().string() + " differs between runs");
    ++files;
  }
  o.require(files > 0, "empty corpus");
  if (o.ok) o.note = std::to_string(files) + " corpus specs, identical JSON across two runs";
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"eps-prolongation identity", criterion1},
      {"symmetrized example flow", criterion2},
      {"radial family", criterion3},
      {"corrected affine family", criterion4},
      {"rejections and converse criterion", criterion5},
      {"flow laws and RK4", criterion6},
      {"factor_B exact instances", criterion7},
      {"module closure", criterion8},
      {"germ flow", criterion9},
      {"report determinism", criterion10},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.ok = false;
      o.note = std::string("exception: ") + e.what();
    }
    if (!o.ok) ++failed;
    std::printf("criterion %2zu %s  %s: %s\n", i + 1, o.ok ? "PASS" : "FAIL", criteria[i].first.c_str(),
                o.note.c_str());
  }
  return failed == 0 ? 0 : 1;
}
