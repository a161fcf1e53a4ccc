#include <benchmark/benchmark.h>

#include "lbjet/expo2_check.hpp"
#include "lbjet/flow_engine.hpp"
#include "lbjet/foliation.hpp"
#include "lbjet/truncation.hpp"

using namespace lbjet;

namespace {

Expr y(int l, int k) { return Expr::jet1(l, k); }

LBField radial() { return build_radial(leaf().pow(2) * Expr(Rational(1, 2)), Expr(0)).field; }

LBField affine() { return build_affine(1, leaf().pow(2) * Expr(Rational(1, 2)), leaf()).field; }

LBField polynomial_field() {
  Expr e1 = y(1, 1) * y(2, 1) + Expr::base(1) * y(1, 0);
  Expr e2 = y(2, 1).pow(2) - y(1, 0);
  return LBField::make(1, 2, {y(1, 1)}, {e1, e2});
}

void BM_Prolong(benchmark::State& state) {
  LBField f = polynomial_field();
  int k = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(prolong(f, k));
}
BENCHMARK(BM_Prolong)->DenseRange(1, 4);

void BM_ProlongRational(benchmark::State& state) {
  LBField f = radial();
  int k = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(prolong(f, k));
}
BENCHMARK(BM_ProlongRational)->DenseRange(1, 3);

void BM_Split(benchmark::State& state) {
  LBField f = radial();
  int k = static_cast<int>(state.range(0));
  ProlongedField p = prolong(f, k);
  for (auto _ : state) benchmark::DoNotOptimize(split(f, p, k));
}
BENCHMARK(BM_Split)->DenseRange(1, 3);

void BM_ZeroTestIdentity(benchmark::State& state) {
  Expr x = Expr::base(1);
  Expr e = sin(x).pow(2) + cos(x).pow(2) - Expr(1);
  for (auto _ : state) benchmark::DoNotOptimize(is_zero(e));
}
BENCHMARK(BM_ZeroTestIdentity);

void BM_ZeroTestStructural(benchmark::State& state) {
  StructureMatrices s = structure_matrices(affine());
  Mat2<Expr> m2 = mat_mul(s.M, s.M);
  for (auto _ : state) benchmark::DoNotOptimize(is_zero(m2[0][0]));
}
BENCHMARK(BM_ZeroTestStructural);

void BM_Rk4SecondOrder(benchmark::State& state) {
  LBField f = affine();
  ProlongedField p = prolong(f, 2);
  FiniteField x2 = build_Xk(p, split(f, p, 2));
  std::map<Var, double> pt;
  for (const auto& v : jet_coordinates(1, 2, 2)) pt[v] = 0.3;
  pt[Var::jet(1, MultiIndex{1})] = 1.0;
  for (auto _ : state) benchmark::DoNotOptimize(rk4_flow(x2, pt, 0.5, 1e-3));
}
BENCHMARK(BM_Rk4SecondOrder)->Unit(benchmark::kMillisecond);

void BM_GroupLawNumeric(benchmark::State& state) {
  FlowMap flow = closed_form_flow(radial());
  FlowCheckOptions o;
  o.samples = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(verify_group_law_numeric(flow, o));
}
BENCHMARK(BM_GroupLawNumeric)->Arg(10)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_Expo2Check(benchmark::State& state) {
  LBField f = affine();
  JetPoint p = make_point(0, 0, 0, 2, 1);
  for (auto _ : state) benchmark::DoNotOptimize(expo2_check(f, p));
}
BENCHMARK(BM_Expo2Check)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
