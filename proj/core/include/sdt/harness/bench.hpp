#pragma once

#include "sdt/harness/scenario.hpp"

namespace sdt::harness {

struct TimingRow {
  std::string solver;    // convex / euler / rk4
  std::string sdf_kind;
  double t_flow_ms = 0.0;
  double t_jac_ms = 0.0;
  double t_step_ms = 0.0;
};

/// Median per-call wall time of one flow solve, one flow Jacobian and one
/// modulation step, for each solver kind, on the scenario's obstacle and
/// dynamics. Requires repeats >= 10.
std::vector<TimingRow> bench_timing(const ScenarioConfig& cfg, int repeats);

std::string timing_csv(const std::vector<TimingRow>& rows);
void write_timing_csv(const std::filesystem::path& path, const std::vector<TimingRow>& rows);

}  // namespace sdt::harness
