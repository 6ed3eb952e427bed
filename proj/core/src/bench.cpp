#include "sdt/harness/bench.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <chrono>
#include <fstream>
#include <sstream>

namespace sdt::harness {

namespace {

using Clock = std::chrono::steady_clock;

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

template <typename Fn>
double timed_median(int repeats, Fn&& fn) {
  std::vector<double> samples;
  samples.reserve(repeats);
  for (int r = 0; r < repeats; ++r) {
    const auto t0 = Clock::now();
    fn();
    samples.push_back(std::chrono::duration<double, std::milli>(Clock::now() - t0).count());
  }
  return median(std::move(samples));
}

}  // namespace

std::vector<TimingRow> bench_timing(const ScenarioConfig& cfg, int repeats) {
  if (repeats < 10) throw std::invalid_argument("bench_timing: repeats must be >= 10");
  if (cfg.obstacle.shape.is_null()) throw std::runtime_error("bench_timing: missing obstacle shape");

  const ResolvedDynamics dyn = resolve_dynamics(cfg);
  const sdf::FieldPtr field = sdf::field_from_json(cfg.obstacle.shape);
  const StateVec probe = dyn.starts.front();

  const std::vector<std::pair<std::string, SolverKind>> solvers = {
      {"convex", {SolverMethod::Convex, 1, cfg.flow_solver.rk4_rule}},
      {"euler", {SolverMethod::Euler, cfg.flow_solver.steps, cfg.flow_solver.rk4_rule}},
      {"rk4", {SolverMethod::RungeKutta4, cfg.flow_solver.steps, cfg.flow_solver.rk4_rule}},
  };

  std::vector<TimingRow> rows;
  for (const auto& [name, solver] : solvers) {
    modulate::ModulatedSystem sys;
    sys.base = dyn.base;
    sys.flow.field = field;
    sys.flow.barrier = cfg.barrier;
    sys.flow.horizon = cfg.flow_horizon;
    sys.flow.solver = solver;
    sys.flow.jac_method = cfg.jac_method;
    sys.cfg = cfg.method;

    diffeo::FlowMap map = sys.flow;
    if (map.barrier.swept != barrier::SweptMode::None) map.swept_field = sys.base;

    TimingRow row;
    row.solver = name;
    row.sdf_kind = field->kind();
    row.t_flow_ms = timed_median(repeats, [&] { (void)diffeo::flow_forward(map, probe); });
    row.t_jac_ms = timed_median(repeats, [&] { (void)diffeo::flow_jacobian(map, probe); });
    row.t_step_ms = timed_median(repeats, [&] { (void)modulate::modulated_velocity(sys, probe); });
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string timing_csv(const std::vector<TimingRow>& rows) {
  std::ostringstream os;
  os << "solver,sdf_kind,t_flow_ms,t_jac_ms,t_step_ms\n";
  for (const auto& r : rows)
    os << r.solver << "," << r.sdf_kind << "," << r.t_flow_ms << "," << r.t_jac_ms << "," << r.t_step_ms << "\n";
  return os.str();
}

void write_timing_csv(const std::filesystem::path& path, const std::vector<TimingRow>& rows) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open for writing: " + path.string());
  os << timing_csv(rows);
}

}  // namespace sdt::harness
