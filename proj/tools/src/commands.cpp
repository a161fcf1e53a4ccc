#include "lbjet_cli/commands.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "lbjet/classifier.hpp"
#include "lbjet/expo2_check.hpp"
#include "lbjet/flow_engine.hpp"
#include "lbjet/foliation.hpp"
#include "lbjet/parser.hpp"
#include "lbjet/truncation.hpp"
#include "lbjet_cli/cli_error.hpp"
#include "lbjet_cli/spec_file.hpp"

#ifndef LBJET_VERSION
#define LBJET_VERSION "0.0.0"
#endif

namespace lbjet::cli {

using nlohmann::ordered_json;

std::string format_double(double v) {
  if (v == 0.0) return "0";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

constexpr double kRk4Agreement = 1e-6;

struct Gated {
  CheckEntry entry;
  std::string section;
  bool gating = true;
};

class Collector {
 public:
  void add(CheckEntry e, std::string section, bool gating = true) {
    items_.push_back({std::move(e), std::move(section), gating});
  }
  const std::vector<Gated>& items() const { return items_; }

  Verdict overall() const {
    Verdict v = Verdict::Pass;
    for (const auto& it : items_) {
      if (!it.gating) continue;
      if (it.entry.verdict == Verdict::Fail) return Verdict::Fail;
      if (it.entry.verdict == Verdict::Unknown) v = Verdict::Unknown;
    }
    return v;
  }

 private:
  std::vector<Gated> items_;
};

int exit_code(Verdict v) {
  switch (v) {
    case Verdict::Pass:
    case Verdict::Skipped:
      return kExitPass;
    case Verdict::Fail:
      return kExitFail;
    case Verdict::Unknown:
      return kExitUnknown;
  }
  return kExitUnknown;
}

ZeroTestOptions zero_opts(const GlobalOptions& g) {
  ZeroTestOptions z;
  z.seed = g.seed;
  return z;
}

ordered_json header(const std::string& command, const std::string& path, const std::string& bytes,
                    const GlobalOptions& g) {
  ordered_json j;
  j["schema_version"] = 1;
  j["tool"] = "lbjet";
  j["tool_version"] = LBJET_VERSION;
  j["command"] = command;
  if (!path.empty()) {
    j["input"] = {{"file", std::filesystem::path(path).filename().string()}, {"fnv1a64", fnv1a_hex(bytes)}};
  }
  j["seed"] = g.seed;
  j["samples"] = g.samples;
  j["tol"] = g.tol;
  return j;
}

ordered_json entry_json(const Gated& g) {
  ordered_json j;
  j["name"] = g.entry.name;
  j["section"] = g.section;
  j["verdict"] = to_string(g.entry.verdict);
  j["mode"] = to_string(g.entry.mode);
  j["residual"] = g.entry.residual;
  j["witness"] = g.entry.witness;
  j["gating"] = g.gating;
  j["details"] = g.entry.details;
  return j;
}

std::string entry_line(const Gated& g) {
  std::ostringstream os;
  os << to_string(g.entry.verdict) << "  " << g.section << "." << g.entry.name << "  [" << to_string(g.entry.mode)
     << "]";
  if (g.entry.residual != 0.0) os << "  residual=" << format_double(g.entry.residual);
  if (!g.gating) os << "  (informational)";
  os << "\n";
  if (!g.entry.witness.empty()) os << "    witness: " << g.entry.witness << "\n";
  return os.str();
}

void finish(CommandResult& r, const Collector& c) {
  ordered_json arr = ordered_json::array();
  std::string lines;
  for (const auto& it : c.items()) {
    arr.push_back(entry_json(it));
    lines += entry_line(it);
  }
  Verdict v = c.overall();
  r.report["entries"] = arr;
  r.report["verdict"] = to_string(v);
  r.text += lines;
  r.text += std::string("verdict: ") + to_string(v) + "\n";
  r.exit_code = exit_code(v);
}

CheckEntry skipped(const std::string& name, const std::string& why) {
  CheckEntry e;
  e.name = name;
  e.verdict = Verdict::Skipped;
  e.witness = why;
  return e;
}

bool is_restricted(const LBField& f) {
  try {
    require_restricted(f);
    return true;
  } catch (const SignatureError&) {
    return false;
  }
}

bool first_order_only(const LBField& f) {
  try {
    require_first_order_only(f);
    return true;
  } catch (const SignatureError&) {
    return false;
  }
}

/// n = 1 and xi, eta0 depend on first-order jets only.
bool first_jets_only(const LBField& f) {
  if (f.n != 1) return false;
  auto ok = [](const Expr& e) {
    for (const auto& v : free_vars(e)) {
      if (!v.is_jet() || v.jet_order() != 1) return false;
    }
    return true;
  };
  return std::all_of(f.xi.begin(), f.xi.end(), ok) && std::all_of(f.eta0.begin(), f.eta0.end(), ok);
}

/// Xi = x + t xi, H^0 = y^0 + t eta0 with higher components lifted. Exact for
/// the foliation families; for other fields the group-law check decides.
FlowMap first_jet_flow(const LBField& f) {
  if (first_order_only(f)) return closed_form_flow(f);
  Expr t = flow_time();
  std::vector<Expr> h0;
  for (int l = 1; l <= f.m; ++l) h0.push_back(Expr::jet1(l, 0) + t * f.eta0[l - 1]);
  return FlowMap(1, f.m, {Expr::base(1) + t * f.xi[0]}, h0);
}

Rational parse_rational(const std::string& text, const std::string& what) {
  Expr e;
  try {
    e = parse(text, Signature{});
  } catch (const ParseError& err) {
    throw CliError(what + ": " + err.what());
  }
  Rational q;
  if (!e.is_rational_constant(&q)) throw CliError(what + " must be a rational number");
  return q;
}

std::vector<Rational> parse_point(const std::string& text) {
  std::vector<Rational> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_rational(item, "point entry"));
  return out;
}

std::string point_string(const JetPoint& p) {
  std::vector<Var> order = jet_coordinates(1, 2, 1);
  std::string s;
  for (const auto& v : order) {
    if (!s.empty()) s += ",";
    s += p.at(v).get_str();
  }
  return s;
}

bool m_nonzero(const StructureMatrices& s, const JetPoint& p) {
  Valuation val;
  for (const auto& [v, q] : p) val.emplace(v, Number(q));
  try {
    for (const auto& row : s.M) {
      for (const auto& e : row) {
        if (!eval(e, val).is_zero()) return true;
      }
    }
  } catch (const EvalError&) {
  }
  return false;
}

/// A point where M does not vanish: a few small integer points first, then seeded rationals.
JetPoint search_point(const LBField& f, const GlobalOptions& g, std::string& how) {
  StructureMatrices s = structure_matrices(f);
  std::vector<JetPoint> candidates{make_point(0, 0, 0, 1, 2), make_point(0, 0, 0, 2, 1), make_point(0, 0, 0, 1, 1),
                                   make_point(0, 0, 0, 1, -1)};
  SampleRng rng(g.seed);
  for (int i = 0; i < 16; ++i) {
    std::array<Rational, 5> q;
    for (auto& v : q) v = random_rational(rng, 10, 2);
    candidates.push_back(make_point(q[0], q[1], q[2], q[3], q[4]));
  }
  for (const auto& p : candidates) {
    if (m_nonzero(s, p)) {
      how = "searched";
      return p;
    }
  }
  how = "searched; M vanishes at every candidate";
  return candidates.front();
}

struct LoadedSpec {
  std::string bytes;
  FieldSpecFile spec;
};

LoadedSpec load(const std::string& path) {
  LoadedSpec l;
  l.bytes = read_file(path);
  l.spec = FieldSpecFile::parse(l.bytes);
  return l;
}

void check_phi(const FieldSpecFile& spec, const GlobalOptions& g, CommandResult& r, Collector& c) {
  ZeroTestOptions zt = zero_opts(g);
  std::vector<Expr> phi = spec.phis();
  Theorem2Result t2 = check_theorem2(spec.n, phi, zt);
  for (auto& p : t2.parts) {
    if (p.name == "theorem2_iii") p.name = "cycle_condition";
    c.add(p, "finite_order");
  }
  if (t2.field) {
    std::ostringstream os;
    for (std::size_t i = 0; i < t2.field->xi.size(); ++i) {
      r.report["induced_field"]["xi" + std::to_string(i + 1)] = t2.field->xi[i].to_string();
      os << "xi" << i + 1 << " = " << t2.field->xi[i].to_string() << "\n";
    }
    for (std::size_t l = 0; l < t2.field->eta0.size(); ++l) {
      r.report["induced_field"]["eta0_" + std::to_string(l + 1)] = t2.field->eta0[l].to_string();
      os << "eta0_" << l + 1 << " = " << t2.field->eta0[l].to_string() << "\n";
    }
    r.text += "induced field:\n" + os.str();
    c.add(verify_lb_identity(prolong(*t2.field, 3), zt), "lb");
  } else {
    c.add(skipped("lb_identity", "no induced field"), "lb");
  }
}

void check_field(const FieldSpecFile& spec, const GlobalOptions& g, CommandResult& r, Collector& c) {
  ZeroTestOptions zt = zero_opts(g);
  LBField f = spec.field();
  bool restricted = is_restricted(f);
  // For restricted fields the finite-order conditions are reported but do not
  // decide: exponentiable fields on the infinite jet bundle may violate them.
  bool finite_gates = !restricted;

  std::vector<Expr> eps0 = epsilon0(f);
  Theorem2Result t2 = check_theorem2(f.n, eps0, zt);
  for (auto& p : t2.parts) {
    if (p.name == "theorem2_iii") p.name = "cycle_condition";
    c.add(p, "finite_order", finite_gates);
  }
  CheckEntry xr;
  xr.name = "xi_recovery";
  try {
    std::vector<Expr> xi = recover_xi(f.n, eps0, zt);
    for (std::size_t i = 0; i < xi.size(); ++i) {
      ZeroStatus z = is_zero(xi[i] - f.xi[i], zt);
      if (z == ZeroStatus::ProvablyZero) continue;
      xr.verdict = z == ZeroStatus::Unknown ? Verdict::Unknown : Verdict::Fail;
      if (z == ZeroStatus::Unknown) xr.mode = ProofMode::Sampled;
      xr.witness = "recovered xi_" + std::to_string(i + 1) + " = " + xi[i].to_string();
      break;
    }
  } catch (const InconsistencyError& e) {
    xr.verdict = Verdict::Fail;
    xr.witness = e.what();
  }
  c.add(xr, "finite_order", finite_gates);

  c.add(verify_lb_identity(prolong(f, 3), zt), "lb");

  static const char* kExpoNames[] = {"theorem6_i",        "theorem6_ii",        "q_formula_crosscheck",
                                     "m_squared_zero",    "m_nonzero_at_point", "module_closure"};
  if (!restricted) {
    for (const char* n : kExpoNames) {
      c.add(skipped(n, "needs n = 1, m = 2 and components free of jets of order >= 2"), "exponentiability");
    }
    return;
  }
  std::string how = "spec";
  JetPoint p;
  if (auto sp = spec.jet_point()) {
    p = *sp;
  } else {
    p = search_point(f, g, how);
  }
  r.report["point"] = {{"value", point_string(p)}, {"source", how}};
  r.text += "point: " + point_string(p) + " (" + how + ")\n";

  Expo2Options eo;
  eo.zero = zt;
  eo.samples = g.samples;
  eo.seed = g.seed;
  eo.tol = g.tol;
  ExpoReport rep = expo2_check(f, p, eo);
  // The individual entries are evidence; the checker's verdict is what gates.
  CheckEntry verdict;
  verdict.name = "verdict";
  verdict.witness = to_string(rep.verdict);
  for (auto e : rep.entries()) {
    if (e.mode == ProofMode::Sampled) verdict.mode = ProofMode::Sampled;
    if (rep.verdict != ExpoVerdict::ExponentiableAtPoint && e.verdict == Verdict::Fail &&
        verdict.witness == to_string(rep.verdict)) {
      verdict.witness += ": " + e.name + (e.witness.empty() ? "" : " (" + e.witness + ")");
    }
    c.add(e, "exponentiability", false);
  }
  verdict.verdict = rep.verdict == ExpoVerdict::ExponentiableAtPoint ? Verdict::Pass
                    : rep.verdict == ExpoVerdict::Rejected          ? Verdict::Fail
                                                                    : Verdict::Unknown;
  c.add(verdict, "exponentiability");
  r.report["expo_verdict"] = to_string(rep.verdict);
  r.text += std::string("exponentiability: ") + to_string(rep.verdict) + "\n";
}

std::vector<double> to_doubles(const std::vector<Rational>& q) {
  std::vector<double> out;
  for (const auto& v : q) out.push_back(to_double(v));
  return out;
}

std::string tuple(const std::vector<double>& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ", ";
    s += std::isnan(v[i]) ? std::string("-") : format_double(v[i]);
  }
  return s + ")";
}

/// Closed-form image on the coordinates it determines (NaN elsewhere).
/// Order 1 uses the truncated flow, which keeps first jets fixed.
std::vector<double> closed_image(const LBField& f, const FlowMap& flow, const std::vector<Var>& coords,
                                 const std::vector<Rational>& point, const Rational& t, int order,
                                 CheckEntry& domain) {
  Valuation val;
  for (std::size_t i = 0; i < coords.size(); ++i) val.emplace(coords[i], Number(point[i]));
  val.emplace(flow_time_var(), Number(t));
  std::vector<double> out(coords.size(), std::nan(""));
  domain.name = "point_in_domain";
  try {
    // Order 1 never evaluates H^1, whose denominator needs second jets.
    if (order > 1 && !flow.singular_denominator.is_constant() &&
        eval(flow.singular_denominator, val).is_zero()) {
      throw EvalError(EvalError::Kind::DivisionByZero, "singular denominator vanishes");
    }
    for (std::size_t i = 0; i < coords.size(); ++i) {
      const Var& v = coords[i];
      if (order == 1 && v.is_jet() && v.jet_order() == 1) {
        out[i] = to_double(point[i]);
        continue;
      }
      if (v.is_jet() && v.jet_order() >= order) continue;
      out[i] = eval(flow.coordinate(v), val).to_double();
    }
  } catch (const EvalError& e) {
    domain.verdict = Verdict::Fail;
    domain.witness = std::string(e.what()) + (flow.validity.empty() ? "" : "; " + flow.validity);
  }
  (void)f;
  return out;
}

/// The truncated field X^(1) leaves first jets fixed.
bool x1_fixes_first_jets(const LBField& f, const ZeroTestOptions& zt) {
  ProlongedField p = prolong(f, 1);
  FiniteField x1 = build_Xk(p, split(f, p, 1));
  for (int l = 1; l <= f.m; ++l) {
    if (is_zero(x1.at(Var::jet(l, MultiIndex{1})), zt) != ZeroStatus::ProvablyZero) return false;
  }
  return true;
}

}  // namespace

CommandResult cmd_check(const std::string& spec_path, const GlobalOptions& g) {
  LoadedSpec l = load(spec_path);
  CommandResult r;
  r.report = header("check", spec_path, l.bytes, g);
  r.report["spec"] = {{"name", l.spec.name},
                      {"kind", l.spec.kind == FieldSpecFile::Kind::Phi ? "phi" : "field"},
                      {"n", l.spec.n},
                      {"m", l.spec.m}};
  if (!l.spec.name.empty()) r.text += "spec: " + l.spec.name + "\n";
  Collector c;
  if (l.spec.kind == FieldSpecFile::Kind::Phi) {
    check_phi(l.spec, g, r, c);
  } else {
    check_field(l.spec, g, r, c);
  }
  finish(r, c);
  return r;
}

CommandResult cmd_prolong(const std::string& spec_path, int order, const GlobalOptions& g) {
  if (order < 0) throw CliError("--order must be >= 0");
  LoadedSpec l = load(spec_path);
  LBField f = l.spec.field();
  ProlongedField p = prolong(f, order);
  CommandResult r;
  r.report = header("prolong", spec_path, l.bytes, g);
  r.report["order"] = order;
  ordered_json comps = ordered_json::array();
  std::ostringstream os;
  for (std::size_t i = 0; i < p.xi.size(); ++i) os << "xi" << i + 1 << " = " << p.xi[i].to_string() << "\n";
  for (const auto& [mp, eta] : p.eta) {
    const Expr& eps = p.eps.at(mp);
    os << "eta" << mp.to_string() << " = " << eta.to_string() << "\n";
    os << "eps" << mp.to_string() << " = " << eps.to_string() << "\n";
    comps.push_back({{"pair", mp.to_string()}, {"eta", eta.to_string()}, {"eps", eps.to_string()}});
  }
  r.report["components"] = comps;
  r.text = os.str();
  Collector c;
  ZeroTestOptions zt = zero_opts(g);
  c.add(verify_lb_identity(p, zt), "lb");
  if (f.n > 1) c.add(check_path_independence(p, zt), "lb");
  finish(r, c);
  return r;
}

CommandResult cmd_truncate(const std::string& spec_path, int order, const GlobalOptions& g) {
  LoadedSpec l = load(spec_path);
  LBField f = l.spec.field();
  ZeroTestOptions zt = zero_opts(g);
  MultiPairSet b = dependency_set(f, zt);
  if (order < b.order()) {
    throw CliError("--order " + std::to_string(order) + " is below the dependency order " + std::to_string(b.order()));
  }
  ProlongedField p = prolong(f, order);
  PolynomialSplit s = split(f, p, order);
  CommandResult r;
  r.report = header("truncate", spec_path, l.bytes, g);
  r.report["order"] = order;
  std::ostringstream os;
  ordered_json bj = ordered_json::array();
  os << "B = {";
  bool first = true;
  for (const auto& mp : b) {
    os << (first ? "" : ", ") << mp.to_string();
    bj.push_back(mp.to_string());
    first = false;
  }
  os << "}\n";
  os << "nu = " << s.nu() << "\n";
  ordered_json mj = ordered_json::array();
  for (std::size_t i = 0; i < s.monomials.size(); ++i) {
    os << "m" << i + 1 << " = " << to_string(s.monomials[i]) << "\n";
    mj.push_back(to_string(s.monomials[i]));
  }
  FiniteField xk = build_Xk(p, s);
  os << "X = " << xk.to_string() << "\n";
  ordered_json yj = ordered_json::array();
  auto ys = build_Yk(p, s);
  for (std::size_t i = 0; i < ys.size(); ++i) {
    os << "Y" << i + 1 << " = " << ys[i].to_string() << "\n";
    yj.push_back(ys[i].to_string());
  }
  r.report["dependency_set"] = bj;
  r.report["nu"] = s.nu();
  r.report["monomials"] = mj;
  r.report["X"] = xk.to_string();
  r.report["Y"] = yj;
  r.text = os.str();
  Collector c;
  c.add(verify_split(p, s, zt), "truncation");
  finish(r, c);
  return r;
}

CommandResult cmd_flow(const std::string& spec_path, const FlowArgs& a, const GlobalOptions& g) {
  if (a.mode != "closed" && a.mode != "rk4") throw CliError("--mode must be closed or rk4");
  if (a.order < 1) throw CliError("--order must be >= 1");
  LoadedSpec l = load(spec_path);
  LBField f = l.spec.field();
  if (f.n != 1) throw CliError("flow needs n = 1");
  ZeroTestOptions zt = zero_opts(g);
  Rational t = parse_rational(a.t, "--t");

  std::vector<Var> coords = jet_coordinates(1, f.m, a.order);
  std::string pt = a.point;
  if (pt.empty() && l.spec.point && a.order == 1 && f.m == 2) pt = *l.spec.point;
  if (pt.empty()) throw CliError("--point is required");
  std::vector<Rational> point = parse_point(pt);
  if (point.size() != coords.size()) {
    throw CliError("--point needs " + std::to_string(coords.size()) + " values for order " + std::to_string(a.order));
  }

  CommandResult r;
  r.report = header("flow", spec_path, l.bytes, g);
  r.report["mode"] = a.mode;
  r.report["t"] = t.get_str();
  r.report["order"] = a.order;
  ordered_json cj = ordered_json::array();
  for (const auto& v : coords) cj.push_back(v.to_string());
  r.report["coordinates"] = cj;
  r.report["point"] = to_doubles(point);

  Collector c;
  bool has_closed = first_jets_only(f);
  std::optional<FlowMap> flow;
  if (has_closed) flow = first_jet_flow(f);
  if (has_closed && a.order == 1 && !x1_fixes_first_jets(f, zt)) has_closed = false;

  std::vector<double> closed;
  if (has_closed) {
    CheckEntry domain;
    closed = closed_image(f, *flow, coords, point, t, a.order, domain);
    c.add(domain, "flow");
    if (!flow->validity.empty()) r.report["validity"] = flow->validity;
  }

  std::vector<double> image;
  if (a.mode == "closed") {
    if (!has_closed) throw CliError("closed mode needs n = 1 and components in first-order jets only");
    image = closed;
  } else {
    MultiPairSet b = dependency_set(f, zt);
    int k = std::max(a.order, b.order());
    if (k != a.order) throw CliError("rk4 needs --order >= " + std::to_string(b.order()));
    ProlongedField p = prolong(f, k);
    FiniteField xk = build_Xk(p, split(f, p, k));
    std::map<Var, double> start;
    for (std::size_t i = 0; i < coords.size(); ++i) start[coords[i]] = to_double(point[i]);
    CheckEntry run;
    run.name = "rk4_integration";
    run.mode = ProofMode::Sampled;
    image.assign(coords.size(), std::nan(""));
    try {
      auto end = rk4_flow(xk, start, to_double(t), a.h);
      for (std::size_t i = 0; i < coords.size(); ++i) image[i] = end.at(coords[i]);
    } catch (const EvalError& e) {
      run.verdict = Verdict::Fail;
      run.witness = e.what();
    }
    c.add(run, "flow");
    if (has_closed && run.passed()) {
      CheckEntry agree;
      agree.name = "rk4_vs_closed";
      agree.mode = ProofMode::Sampled;
      for (std::size_t i = 0; i < coords.size(); ++i) {
        if (std::isnan(closed[i])) continue;
        double d = std::fabs(closed[i] - image[i]);
        if (d > agree.residual) {
          agree.residual = d;
          agree.witness = coords[i].to_string();
        }
      }
      if (agree.residual >= kRk4Agreement) agree.verdict = Verdict::Fail;
      else agree.witness.clear();
      agree.details.push_back("agreement tolerance " + format_double(kRk4Agreement) + ", step " +
                              format_double(a.h));
      c.add(agree, "flow");
    }
  }
  r.report["image"] = image;
  r.text += tuple(to_doubles(point)) + " -> " + tuple(image) + "\n";

  if (flow) {
    c.add(verify_eq2(*flow, 1, zt), "flow");
    FlowCheckOptions fo;
    fo.samples = g.samples;
    fo.seed = g.seed;
    fo.tol = g.tol;
    GroupLawResult gl = verify_group_law_numeric(*flow, fo);
    c.add(gl.entry, "flow");
  }
  finish(r, c);
  return r;
}

CommandResult cmd_construct(const ConstructArgs& a, const GlobalOptions& g) {
  Signature sig{1, 2, {"l"}};
  auto ex = [&](const std::string& text, const std::string& what) {
    try {
      return parse(text, sig);
    } catch (const ParseError& e) {
      throw CliError(what + ": " + e.what());
    }
  };
  if (a.F1.empty()) throw CliError("--F1 is required");
  Expr F1 = ex(a.F1, "--F1");
  Expr gp = ex(a.g, "--g");
  ZeroTestOptions zt = zero_opts(g);

  FoliationField built;
  std::string origin = "construct --family " + a.family + " --F1 '" + a.F1 + "' --g '" + a.g + "'";
  try {
    if (a.family == "radial") {
      built = build_radial(F1, gp);
    } else if (a.family == "affine") {
      Rational gamma = parse_rational(a.gamma, "--gamma");
      built = a.printed ? build_affine_printed(gamma, F1, gp) : build_affine(gamma, F1, gp);
      origin += " --gamma " + gamma.get_str() + (a.printed ? " --printed" : "");
    } else if (a.family == "general") {
      if (a.lambda.empty() || a.slope.empty() || a.q0.empty()) {
        throw CliError("general family needs --lambda, --slope and --q0");
      }
      FoliationSpec s;
      s.family = FoliationFamily::General;
      s.lambda = ex(a.lambda, "--lambda");
      s.slope = ex(a.slope, "--slope");
      s.q0 = ex(a.q0, "--q0");
      s.F1 = F1;
      s.g = gp;
      CheckReport fr = check_foliation(s, zt);
      for (const auto& e : fr.entries) {
        if (e.verdict == Verdict::Fail) throw CliError(e.name + " fails: " + e.witness);
      }
      built = build_general(s, zt);
      origin += " --lambda '" + a.lambda + "' --slope '" + a.slope + "' --q0 '" + a.q0 + "'";
    } else {
      throw CliError("--family must be radial, affine or general");
    }
  } catch (const QuadratureError& e) {
    throw CliError(std::string("quadrature unsupported: ") + e.what());
  } catch (const SignatureError& e) {
    throw CliError(e.what());
  }

  FieldSpecFile out;
  out.name = a.name.empty() ? a.family : a.name;
  out.origin = origin;
  out.n = 1;
  out.m = 2;
  for (const auto& e : built.field.xi) out.xi.push_back(e.to_string());
  for (const auto& e : built.field.eta0) out.eta0.push_back(e.to_string());
  // The emitted text must parse back to the same field.
  LBField again = out.field();
  for (std::size_t i = 0; i < 2; ++i) {
    if (!(again.eta0[i] == built.field.eta0[i])) throw std::logic_error("emitted eta0 does not round-trip");
  }
  if (!(again.xi[0] == built.field.xi[0])) throw std::logic_error("emitted xi does not round-trip");

  CommandResult r;
  r.report = header("construct", "", "", g);
  r.report["family"] = a.family;
  r.report["profiles"] = {{"f1", built.f1.to_string()}, {"f2", built.f2.to_string()}, {"g", built.g.to_string()}};
  r.report["notes"] = built.notes;
  r.report["spec"] = out.to_text();
  r.text = out.to_text();

  Collector c;
  ZeroTally ode("ode_residual", zt);
  ode.expect_zero(built.ode_residual, "f2' - m f1' - q0 g'");
  c.add(ode.take(), "construction");
  ordered_json arr = ordered_json::array();
  for (const auto& it : c.items()) arr.push_back(entry_json(it));
  r.report["entries"] = arr;
  Verdict v = c.overall();
  r.report["verdict"] = to_string(v);
  r.exit_code = exit_code(v);
  return r;
}

CommandResult cmd_verify(const std::string& spec_path, const VerifyArgs& a, const GlobalOptions& g) {
  if (a.order < 1) throw CliError("--order must be >= 1");
  LoadedSpec l = load(spec_path);
  LBField f = l.spec.field();
  ZeroTestOptions zt = zero_opts(g);
  CommandResult r;
  r.report = header("verify", spec_path, l.bytes, g);
  r.report["order"] = a.order;
  Collector c;

  ProlongedField p = prolong(f, a.order);
  c.add(verify_lb_identity(p, zt), "lb");
  for (std::size_t i = 1; i <= f.n; ++i) {
    c.add(commutator_defect(p, static_cast<int>(i), {}, zt), "lb");
  }
  if (f.n > 1) c.add(check_path_independence(p, zt), "lb");

  static const char* kFlowNames[] = {"group_law_symbolic", "group_law", "eq2", "eq2_numeric"};
  if (!first_jets_only(f)) {
    for (const char* n : kFlowNames) c.add(skipped(n, "needs n = 1 and components in first-order jets only"), "flow");
    if (!a.germ.empty()) c.add(skipped("germ_flow", "no closed-form flow"), "germ");
    finish(r, c);
    return r;
  }
  FlowMap flow = first_jet_flow(f);
  FlowCheckOptions fo;
  fo.samples = g.samples;
  fo.seed = g.seed;
  fo.tol = g.tol;
  c.add(verify_group_law_symbolic(flow, 1, zt), "flow");
  GroupLawResult gl = verify_group_law_numeric(flow, fo);
  if (gl.singular_resamples > 0) {
    gl.entry.details.push_back(std::to_string(gl.singular_resamples) + " samples redrawn off the singular locus");
  }
  c.add(gl.entry, "flow");
  c.add(verify_eq2(flow, 2, zt), "flow");
  c.add(verify_eq2_numeric(flow, 2, fo), "flow");

  if (!a.germ.empty()) {
    std::vector<Expr> prof;
    std::stringstream ss(a.germ);
    std::string item;
    Signature sig{1, f.m, {}};
    while (std::getline(ss, item, ';')) {
      try {
        prof.push_back(parse(item, sig));
      } catch (const ParseError& e) {
        throw CliError("--germ: " + std::string(e.what()));
      }
    }
    if (static_cast<int>(prof.size()) != f.m) throw CliError("--germ needs " + std::to_string(f.m) + " profiles");
    GermFlowResult gr = germ_flow(flow, prof, a.a, a.b, a.t, a.points);
    CheckEntry inv;
    inv.name = "germ_invertible";
    inv.mode = ProofMode::Sampled;
    if (!gr.invertible) {
      inv.verdict = Verdict::Fail;
      inv.witness = "base motion is not monotone on the window";
    }
    c.add(inv, "germ");
    CheckEntry h1;
    h1.name = "germ_h1_consistency";
    h1.mode = ProofMode::Sampled;
    h1.residual = gr.h1_residual;
    h1.details = gr.notes;
    if (!gr.h1_ok) h1.verdict = Verdict::Fail;
    c.add(h1, "germ");
    if (!a.csv_path.empty()) {
      std::ofstream out(a.csv_path, std::ios::binary);
      if (!out) throw CliError("cannot write " + a.csv_path);
      out << germ_csv(gr);
      r.text += "wrote " + a.csv_path + "\n";
    }
  }
  finish(r, c);
  return r;
}

}  // namespace lbjet::cli
