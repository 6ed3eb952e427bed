#include "sdt/modulate.hpp"
#include "sdt/sdf/primitives.hpp"

#include <benchmark/benchmark.h>

using namespace sdt;

namespace {

diffeo::FlowMap make_map(SolverMethod method, int steps) {
  diffeo::FlowMap map;
  map.field = std::make_shared<sdf::CircleSdf>(Eigen::Vector2d(1.0, 0.0), 0.3);
  map.barrier.s_grad = 0.1;
  map.barrier.t_save = 0.05;
  map.horizon = 0.25;
  map.solver = {method, steps};
  return map;
}

StateVec probe() {
  StateVec y(2);
  y << 1.8, 0.4;
  return y;
}

void FlowForward_Convex(benchmark::State& state) {
  const auto map = make_map(SolverMethod::Convex, 1);
  const StateVec y = probe();
  for (auto _ : state) benchmark::DoNotOptimize(diffeo::flow_forward(map, y));
}

void FlowForward_Euler(benchmark::State& state) {
  const auto map = make_map(SolverMethod::Euler, static_cast<int>(state.range(0)));
  const StateVec y = probe();
  for (auto _ : state) benchmark::DoNotOptimize(diffeo::flow_forward(map, y));
}

void FlowForward_RK4(benchmark::State& state) {
  const auto map = make_map(SolverMethod::RungeKutta4, static_cast<int>(state.range(0)));
  const StateVec y = probe();
  for (auto _ : state) benchmark::DoNotOptimize(diffeo::flow_forward(map, y));
}

void FlowJacobian_FiniteDifference(benchmark::State& state) {
  auto map = make_map(SolverMethod::RungeKutta4, 10);
  map.jac_method = diffeo::JacMethod::FiniteDifference;
  const StateVec y = probe();
  for (auto _ : state) benchmark::DoNotOptimize(diffeo::flow_jacobian(map, y));
}

void FlowJacobian_ForwardSensitivity(benchmark::State& state) {
  auto map = make_map(SolverMethod::RungeKutta4, 10);
  map.jac_method = diffeo::JacMethod::ForwardSensitivity;
  const StateVec y = probe();
  for (auto _ : state) benchmark::DoNotOptimize(diffeo::flow_jacobian(map, y));
}

void ModulationStep(benchmark::State& state) {
  modulate::ModulatedSystem sys;
  sys.base = [](const StateVec& x) { return StateVec(-x); };
  sys.flow = make_map(SolverMethod::RungeKutta4, 10);
  sys.cfg.method = static_cast<modulate::Method>(state.range(0));
  const StateVec y = probe();
  for (auto _ : state) benchmark::DoNotOptimize(modulate::modulated_velocity(sys, y));
}

}  // namespace

BENCHMARK(FlowForward_Convex);
BENCHMARK(FlowForward_Euler)->Arg(10)->Arg(20);
BENCHMARK(FlowForward_RK4)->Arg(10)->Arg(20);
BENCHMARK(FlowJacobian_FiniteDifference);
BENCHMARK(FlowJacobian_ForwardSensitivity);
BENCHMARK(ModulationStep)
    ->Arg(static_cast<int>(sdt::modulate::Method::SDDC))
    ->Arg(static_cast<int>(sdt::modulate::Method::SDC))
    ->Arg(static_cast<int>(sdt::modulate::Method::MM))
    ->Arg(static_cast<int>(sdt::modulate::Method::ARPF));

BENCHMARK_MAIN();
