#pragma once

#include <array>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>

#include "lbjet/lb_field.hpp"
#include "lbjet/sampling.hpp"

namespace lbjet {

/// 2x2 matrix, indexed [row][column].
template <class T>
using Mat2 = std::array<std::array<T, 2>, 2>;

template <class T>
Mat2<T> mat_mul(const Mat2<T>& a, const Mat2<T>& b) {
  Mat2<T> r;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) r[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
  }
  return r;
}

template <class T>
Mat2<T> transpose(const Mat2<T>& a) {
  return Mat2<T>{{{a[0][0], a[1][0]}, {a[0][1], a[1][1]}}};
}

/// First-order data of a field on J(R, R^2) whose principal components are
/// free of jets of order >= 2. Matrices store the lower index as the row:
/// M[L][Q] = M^Q_L and Q[M][R] = Q^R_M.
struct StructureMatrices {
  std::array<Expr, 2> O;
  Mat2<Expr> N;
  Mat2<Expr> M;
  Mat2<Expr> Q;
  /// Q as given by the closed formula, for comparison with Q.
  Mat2<Expr> Q_formula;
};

/// Throws SignatureError unless n = 1, m = 2 and no component mentions a jet of order >= 2.
void require_restricted(const LBField& f);

StructureMatrices structure_matrices(const LBField& f);

class FactorError : public std::runtime_error {
 public:
  FactorError(std::string hypothesis, const std::string& what)
      : std::runtime_error(what), hypothesis_(std::move(hypothesis)) {}
  const std::string& hypothesis() const { return hypothesis_; }

 private:
  std::string hypothesis_;
};

/// B with A = B M, given M^2 = 0, M != 0 and A M = 0. `is_zero` decides
/// entry zeroness. Uses the first nonzero row M_r of M: b_i = A[i][j] / M[r][j]
/// for a column j with M[r][j] != 0, and B carries b in column r.
template <class T, class IsZero>
Mat2<T> factor_B(const Mat2<T>& A, const Mat2<T>& M, IsZero is_zero) {
  auto all_zero = [&](const Mat2<T>& x) {
    for (const auto& row : x) {
      for (const auto& v : row) {
        if (!is_zero(v)) return false;
      }
    }
    return true;
  };
  if (!all_zero(mat_mul(M, M))) throw FactorError("M^2 = 0", "factor_B: M is not nilpotent");
  if (all_zero(M)) throw FactorError("M != 0", "factor_B: M vanishes");
  if (!all_zero(mat_mul(A, M))) throw FactorError("A M = 0", "factor_B: A M is not zero");
  int r = (is_zero(M[0][0]) && is_zero(M[0][1])) ? 1 : 0;
  int j = is_zero(M[r][0]) ? 1 : 0;
  Mat2<T> B;
  for (auto& row : B) row.fill(T(0));
  for (int i = 0; i < 2; ++i) B[i][r] = A[i][j] / M[r][j];
  return B;
}

/// Exact rational instance.
Mat2<Rational> factor_B(const Mat2<Rational>& A, const Mat2<Rational>& M);
/// Symbolic instance; entries are compared with the tri-state zero test
/// (anything not provably zero counts as nonzero).
Mat2<Expr> factor_B(const Mat2<Expr>& A, const Mat2<Expr>& M);

struct Expo2Options {
  ZeroTestOptions zero;
  int samples = 100;
  std::uint64_t seed = 42;
  double tol = 1e-9;
};

/// Point of J^1(R, R^2): values for x1, u1[0], u2[0], u1[1], u2[1].
using JetPoint = std::map<Var, Rational>;
JetPoint make_point(const Rational& x, const Rational& y01, const Rational& y02, const Rational& y11,
                    const Rational& y12);

/// Conditions (i) and (ii): 12 contractions sum_M C[M][R] * dF/dy^1_M for
/// C in {M, Q}, F in {xi, eta0_1, eta0_2}, R = 1, 2. Each is zero-tested and
/// sampled at rational points; `residual` holds the largest relative sample value.
std::array<CheckEntry, 2> theorem6_conditions(const LBField& f, const StructureMatrices& s,
                                              const Expo2Options& opts = {});

/// Compares the bracket-derived Q with the closed formula entrywise.
CheckEntry q_formula_crosscheck(const StructureMatrices& s, const ZeroTestOptions& opts = {});

struct NilpotencyResult {
  CheckEntry square_zero;  // M^2 = 0 entrywise
  CheckEntry nonzero_at;   // M != 0 at the point
  Mat2<Expr> M2;
};

NilpotencyResult nilpotency_check(const StructureMatrices& s, const JetPoint& p, const ZeroTestOptions& opts = {});

struct ClosureResult {
  CheckEntry entry;
  /// A[R][N] with [X^(2), Y^(2)_R] = sum_N A[R][N] Y^(2)_N, when found.
  std::optional<Mat2<Expr>> A;
};

/// Requires both contraction conditions to pass (throws PreconditionError otherwise).
ClosureResult module_closure(const LBField& f, const StructureMatrices& s, const Expo2Options& opts = {});

enum class ExpoVerdict { ExponentiableAtPoint, Rejected, Inconclusive };
const char* to_string(ExpoVerdict v);

struct ExpoReport {
  StructureMatrices s;
  CheckEntry cond_i, cond_ii, q_crosscheck;
  NilpotencyResult nilpotency;
  std::optional<ClosureResult> closure;
  ExpoVerdict verdict = ExpoVerdict::Inconclusive;

  std::vector<CheckEntry> entries() const;
};

ExpoReport expo2_check(const LBField& f, const JetPoint& p, const Expo2Options& opts = {});

}  // namespace lbjet
