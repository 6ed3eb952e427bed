#pragma once

#include "sdt/harness/demos.hpp"
#include "sdt/metrics.hpp"
#include "sdt/modulate.hpp"
#include "sdt/sdf/articulated.hpp"
#include "sdt/sdf/serialize.hpp"

#include <nlohmann/json.hpp>

#include <optional>

namespace sdt::harness {

struct RolloutConfig {
  double dt = 0.02;
  int max_steps = 1500;
  double goal_tol = 0.02;
  std::vector<StateVec> starts;  // empty: demo start states
};

struct ObstacleConfig {
  nlohmann::json shape;                       // sdf::field_from_json spec
  std::optional<Eigen::Vector2d> jitter_lo;   // per-trial uniform center offset
  std::optional<Eigen::Vector2d> jitter_hi;
};

struct DynamicsConfig {
  std::string kind = "analytic_linear";  // or "ncds"
  double rate = 1.0;                     // analytic_linear: xdot = -rate (x - goal)
  std::string checkpoint;                // ncds: model path
};

struct ScenarioConfig {
  std::string scenario_id = "scenario";
  std::uint64_t seed = 0;
  int trials = 1;
  SynthDemoConfig demos;
  std::vector<std::string> demo_csvs;  // overrides the synthetic generator when set
  DynamicsConfig dynamics;
  ObstacleConfig obstacle;
  modulate::MethodConfig method;
  barrier::BarrierConfig barrier;
  double flow_horizon = 1.0;
  SolverKind flow_solver;
  diffeo::JacMethod jac_method = diffeo::JacMethod::FiniteDifference;
  RolloutConfig rollout;

  void validate() const;
};

ScenarioConfig scenario_from_json(const nlohmann::json& j);
nlohmann::json scenario_to_json(const ScenarioConfig& cfg);
ScenarioConfig load_scenario(const std::filesystem::path& path);  // honors SDTLAB_SEED

struct TrialResult {
  int trial = 0;
  metrics::MetricReport metrics;
  double t_step_ms = 0.0;  // median modulation-step wall time
  double t_flow_ms = 0.0;  // median single flow solve
  double t_jac_ms = 0.0;   // median single flow Jacobian
  bool failed = false;
  std::vector<std::string> events;  // collisions, saturation, singularity warnings
  Trajectory base;
  Trajectory modulated;
  nlohmann::json obstacle;  // the jittered shape this trial actually used
};

struct ScenarioReport {
  int schema_version = 1;
  std::string scenario_id;
  std::string method;
  std::string sdf_kind;
  double s_grad = 0.0;
  std::vector<TrialResult> trials;
};

/// Base dynamics plus rollout anchors, resolved from config (demo synthesis /
/// CSV ingestion, checkpoint loading).
struct ResolvedDynamics {
  VectorField base;
  StateVec goal;
  std::vector<StateVec> starts;
};

ResolvedDynamics resolve_dynamics(const ScenarioConfig& cfg);

/// Per trial: jitter the obstacle, build the flow, roll out the modulated
/// system and the obstacle-free base from the same start, evaluate the metric
/// suite and timings.
ScenarioReport run_scenario(const ScenarioConfig& cfg);
ScenarioReport run_scenario(const ScenarioConfig& cfg, const ResolvedDynamics& dynamics);

/// One modulated rollout (Euler stepping of the modulated velocity).
Trajectory rollout_modulated(const modulate::ModulatedSystem& sys, const StateVec& start,
                             const RolloutConfig& cfg, const StateVec& goal,
                             std::vector<std::string>* events = nullptr,
                             diffeo::FlowStats* stats = nullptr,
                             std::vector<double>* step_times_ms = nullptr);

/// Obstacle-free base rollout with the same stepping.
Trajectory rollout_base(const VectorField& base, const StateVec& start, const RolloutConfig& cfg,
                        const StateVec& goal);

/// Nearest scene point to the posed body (articulated x_query selection).
Eigen::Vector2d nearest_scene_point(const sdf::ArticulatedBody& body, const StateVec& q,
                                    const std::vector<Eigen::Vector2d>& scene_points);

}  // namespace sdt::harness
