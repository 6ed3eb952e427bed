#include "sdt/ncds.hpp"
#include "sdt/harness/demos.hpp"
#include "sdt/sdf/primitives.hpp"
#include "sdt/sdf/train.hpp"

#include <benchmark/benchmark.h>

using namespace sdt;

namespace {

StateVec probe() {
  StateVec x(2);
  x << 0.9, 0.4;
  return x;
}

// trained fields are built once and shared across iterations
const sdf::MlpSdf& mlp_field() {
  static const sdf::MlpSdf field = [] {
    const sdf::CircleSdf circle({0.0, 0.0}, 0.6);
    sdf::Bounds bounds;
    bounds.lo = (StateVec(2) << -2.0, -2.0).finished();
    bounds.hi = (StateVec(2) << 2.0, 2.0).finished();
    sdf::SdfTrainConfig cfg;
    cfg.epochs = 5;
    cfg.weights.w_ten = 0.0;
    return sdf::train_mlp_sdf(sdf::sample_train_set(circle, bounds, 4000, 1), {64, 32, 16}, cfg);
  }();
  return field;
}

const sdf::BernsteinSdf& bp_field() {
  static const sdf::BernsteinSdf field = [] {
    const sdf::CircleSdf circle({0.0, 0.0}, 0.6);
    sdf::Bounds bounds;
    bounds.lo = (StateVec(2) << -2.0, -2.0).finished();
    bounds.hi = (StateVec(2) << 2.0, 2.0).finished();
    sdf::SdfTrainConfig cfg;
    cfg.epochs = 5;
    return sdf::train_bernstein_sdf(sdf::sample_train_set(circle, bounds, 4000, 1), 8, cfg);
  }();
  return field;
}

void SdfEval_Primitive(benchmark::State& state) {
  const sdf::CircleSdf field({0.0, 0.0}, 0.6);
  const StateVec x = probe();
  for (auto _ : state) benchmark::DoNotOptimize(field.value(x));
}

void SdfEval_Mlp(benchmark::State& state) {
  const auto& field = mlp_field();
  const StateVec x = probe();
  for (auto _ : state) benchmark::DoNotOptimize(field.value(x));
}

void SdfEval_Bernstein(benchmark::State& state) {
  const auto& field = bp_field();
  const StateVec x = probe();
  for (auto _ : state) benchmark::DoNotOptimize(field.value(x));
}

void SdfGradient_Mlp(benchmark::State& state) {
  const auto& field = mlp_field();
  const StateVec x = probe();
  for (auto _ : state) benchmark::DoNotOptimize(field.gradient(x));
}

void SdfGradient_Bernstein(benchmark::State& state) {
  const auto& field = bp_field();
  const StateVec x = probe();
  for (auto _ : state) benchmark::DoNotOptimize(field.gradient(x));
}

void NcdsVelocity(benchmark::State& state) {
  harness::SynthDemoConfig cfg;
  cfg.samples = 50;
  const auto demos = harness::synth_demos(cfg);
  const auto model = ncds::make_model(demos, {100, 100}, 0.05, 7, static_cast<int>(state.range(0)));
  const StateVec x = probe();
  for (auto _ : state) benchmark::DoNotOptimize(ncds::velocity(model, x));
}

}  // namespace

BENCHMARK(SdfEval_Primitive);
BENCHMARK(SdfEval_Mlp);
BENCHMARK(SdfEval_Bernstein);
BENCHMARK(SdfGradient_Mlp);
BENCHMARK(SdfGradient_Bernstein);
BENCHMARK(NcdsVelocity)->Arg(1)->Arg(2);
