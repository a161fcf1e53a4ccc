#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "lbjet/lb_field.hpp"
#include "lbjet/sampling.hpp"
#include "lbjet/truncation.hpp"

namespace lbjet {

/// The flow parameter.
Expr flow_time();
Var flow_time_var();

/// Symbolic flow components Xi_i(t, .) and H^a_L(t, .), n = 1 for lifting.
/// Components not set explicitly are lifted on demand and cached.
class FlowMap {
 public:
  FlowMap(std::size_t n, int m, std::vector<Expr> xi, std::vector<Expr> h0);

  std::size_t n() const { return n_; }
  int m() const { return m_; }
  const std::vector<Expr>& xi() const { return xi_; }

  /// Fixes H^a_L; drops every cached lifted component.
  void set_component(const MultiPair& p, Expr e);
  bool has_explicit(const MultiPair& p) const { return explicit_.count(p) != 0; }

  /// H^a_L, lifting if needed.
  const Expr& component(const MultiPair& p) const;
  /// Component for a coordinate variable: Xi for x_i, H for y^a_L.
  const Expr& coordinate(const Var& v) const;

  /// Description of where the closed form is singular (empty if nowhere).
  std::string validity;
  /// Denominator whose vanishing marks the singular locus (1 if none).
  Expr singular_denominator = Expr(1);

 private:
  friend const Expr& lift_component(const FlowMap& flow, const MultiPair& target);

  std::size_t n_;
  int m_;
  std::vector<Expr> xi_;
  std::map<MultiPair, Expr> explicit_;
  mutable std::map<MultiPair, Expr> lifted_;
};

/// H^{k+1}_L = D H^k_L / D Xi (n = 1). Throws PreconditionError for n > 1 and
/// std::domain_error when D Xi vanishes identically.
const Expr& lift_component(const FlowMap& flow, const MultiPair& target);

struct H1Result {
  std::vector<Expr> h1;
  /// 1 + t y^2_Q dxi/dy^1_Q.
  Expr denominator;
  std::string locus;
};

/// The quotient (y^1_L + t y^2_Q deta0_L/dy^1_Q) / (1 + t y^2_Q dxi/dy^1_Q).
H1Result h1_component(const LBField& f);

/// Throws SignatureError unless n = 1, m = 2 and xi, eta0 depend on y^1 only.
void require_first_order_only(const LBField& f);

/// Xi = x + t xi, H^0_L = y^0_L + t eta0_L, H^1 from h1_component.
FlowMap closed_form_flow(const LBField& f);

/// Generic fixed-step classical RK4 for z' = rhs(z); the last step is shortened.
/// Negative t integrates backwards.
std::vector<double> rk4_integrate(const std::function<void(const double*, double*)>& rhs, std::vector<double> z,
                                  double t, double h);

/// RK4 flow of a finite field; the point maps each coordinate of J^k to a value
/// (missing coordinates start at 0).
std::map<Var, double> rk4_flow(const FiniteField& xk, const std::map<Var, double>& point, double t, double h);

struct FlowCheckOptions {
  int samples = 100;
  std::uint64_t seed = 42;
  double t = 0.1;
  double s = 0.07;
  /// Components up to this jet order are compared.
  int order = 1;
  /// Jet coordinates are drawn from [-range, range].
  double range = 2.0;
  double tol = 1e-9;
};

struct GroupLawResult {
  CheckEntry entry;
  int singular_resamples = 0;
};

/// max |Phi_t(Phi_s(p)) - Phi_{t+s}(p)| over random p, in double precision.
GroupLawResult verify_group_law_numeric(const FlowMap& flow, const FlowCheckOptions& opts = {});

/// Symbolic composition with a second time symbol s; provably-zero expected.
CheckEntry verify_group_law_symbolic(const FlowMap& flow, int order, const ZeroTestOptions& zt = {});

/// D Xi H^{a+1}_L - D H^a_L for a < k (n = 1).
CheckEntry verify_eq2(const FlowMap& flow, int k, const ZeroTestOptions& zt = {});

/// Same identity evaluated at random points with |t| <= 0.1; residual is the max.
CheckEntry verify_eq2_numeric(const FlowMap& flow, int k, const FlowCheckOptions& opts = {});

struct GermFlowResult {
  double t = 0.0;
  std::vector<double> x;
  std::vector<double> psi;
  /// f[L][j] and ft[L][j]: original and transformed components at x[j].
  std::vector<std::vector<double>> f, ft;
  bool invertible = true;
  /// Largest relative mismatch between d f_t / dx and H^1 along the graph.
  double h1_residual = 0.0;
  bool h1_ok = true;
  std::vector<std::string> notes;
};

/// Samples the induced action on germs: Psi_t(x) = Xi_t(tau f(x)) and
/// f_{Lt} = H^0_Lt(tau f) o Psi_t^{-1}, on `samples` equally spaced points of [a, b].
/// `f` are expressions in x1.
GermFlowResult germ_flow(const FlowMap& flow, const std::vector<Expr>& f, double a, double b, double t, int samples);

/// RFC-4180 CSV with columns t, x, f1.., f1t.., psi_t.
std::string germ_csv(const GermFlowResult& r);

}  // namespace lbjet
