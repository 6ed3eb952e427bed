#include "sdt/harness/scenario.hpp"

#include "sdt/trajectory_io.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <random>

namespace sdt::harness {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

SolverKind solver_from_json(const nlohmann::json& j) {
  SolverKind s;
  const auto name = j.value("method", "rk4");
  if (name == "convex") s.method = SolverMethod::Convex;
  else if (name == "euler") s.method = SolverMethod::Euler;
  else if (name == "rk4") s.method = SolverMethod::RungeKutta4;
  else throw std::runtime_error("scenario: unknown solver '" + name + "'");
  s.steps = j.value("steps", 10);
  s.rk4_rule = j.value("rk4_rule", "three_eighths") == "classic" ? Rk4Rule::Classic : Rk4Rule::ThreeEighths;
  return s;
}

nlohmann::json solver_to_json(const SolverKind& s) {
  nlohmann::json j;
  j["method"] = s.method == SolverMethod::Convex ? "convex"
              : s.method == SolverMethod::Euler  ? "euler"
                                                 : "rk4";
  j["steps"] = s.steps;
  j["rk4_rule"] = s.rk4_rule == Rk4Rule::Classic ? "classic" : "three_eighths";
  return j;
}

// translate a primitive/union shape spec by a 2D offset
nlohmann::json translate_shape(const nlohmann::json& shape, const Eigen::Vector2d& off) {
  nlohmann::json out = shape;
  const auto type = shape.at("type").get<std::string>();
  auto shift = [&off](nlohmann::json& pt) {
    pt[0] = pt[0].get<double>() + off.x();
    pt[1] = pt[1].get<double>() + off.y();
  };
  if (type == "circle" || type == "box" || type == "arc") {
    shift(out.at("center"));
  } else if (type == "capsule") {
    shift(out.at("a"));
    shift(out.at("b"));
  } else if (type == "triangle") {
    for (auto& v : out.at("vertices")) shift(v);
  } else if (type == "half_plane") {
    const auto n = shape.at("normal").get<std::vector<double>>();
    out["offset"] = shape.at("offset").get<double>() + n[0] * off.x() + n[1] * off.y();
  } else if (type == "union") {
    for (auto& part : out.at("parts")) part = translate_shape(part, off);
  } else {
    throw std::runtime_error("scenario: pose jitter unsupported for shape type '" + type + "'");
  }
  return out;
}

std::string method_label(const ScenarioConfig& cfg) {
  std::string name = modulate::to_string(cfg.method.method);
  const bool inv = cfg.barrier.swept == barrier::SweptMode::None || cfg.barrier.combine;
  if (inv) name += "_inv";
  if (cfg.barrier.swept != barrier::SweptMode::None) name += "_swept";
  return name;
}

}  // namespace

void ScenarioConfig::validate() const {
  if (trials < 1) throw std::invalid_argument("scenario: trials must be >= 1");
  if (!(rollout.dt > 0.0)) throw std::invalid_argument("scenario: rollout dt must be > 0");
  if (rollout.max_steps < 1) throw std::invalid_argument("scenario: max_steps must be >= 1");
  barrier.validate();
  method.validate();
  if (flow_horizon < 0.0) throw std::invalid_argument("scenario: flow horizon must be >= 0");
}

ScenarioConfig scenario_from_json(const nlohmann::json& j) {
  ScenarioConfig cfg;
  cfg.scenario_id = j.value("scenario_id", "scenario");
  cfg.seed = j.value("seed", 0ull);
  cfg.trials = j.value("trials", 1);

  if (j.contains("demos")) {
    const auto& dj = j.at("demos");
    cfg.demos.kind = demo_kind_from_string(dj.value("kind", "sine"));
    cfg.demos.n_demos = dj.value("n_demos", 5);
    cfg.demos.samples = dj.value("samples", 200);
    cfg.demos.duration = dj.value("duration", 5.0);
    cfg.demos.noise = dj.value("noise", 0.0);
    cfg.demos.seed = dj.value("seed", cfg.seed);
    cfg.demos.scale = dj.value("scale", 2.0);
    cfg.demos.amplitude = dj.value("amplitude", 0.5);
    cfg.demos.start_jitter = dj.value("start_jitter", 0.15);
    if (dj.contains("target"))
      cfg.demos.target = {dj.at("target").at(0).get<double>(), dj.at("target").at(1).get<double>()};
  }
  if (j.contains("demo_csvs")) cfg.demo_csvs = j.at("demo_csvs").get<std::vector<std::string>>();

  if (j.contains("dynamics")) {
    const auto& yj = j.at("dynamics");
    cfg.dynamics.kind = yj.value("kind", "analytic_linear");
    cfg.dynamics.rate = yj.value("rate", 1.0);
    cfg.dynamics.checkpoint = yj.value("checkpoint", "");
  }

  if (j.contains("obstacle")) {
    const auto& oj = j.at("obstacle");
    cfg.obstacle.shape = oj.at("shape");
    if (oj.contains("jitter")) {
      const auto& jj = oj.at("jitter");
      cfg.obstacle.jitter_lo = Eigen::Vector2d(jj.at("lo").at(0).get<double>(), jj.at("lo").at(1).get<double>());
      cfg.obstacle.jitter_hi = Eigen::Vector2d(jj.at("hi").at(0).get<double>(), jj.at("hi").at(1).get<double>());
    }
  }

  if (j.contains("method")) {
    const auto& mj = j.at("method");
    cfg.method.method = modulate::method_from_string(mj.value("name", "sdc"));
    cfg.method.mm_p = mj.value("mm_p", 1.0);
    cfg.method.arpf_eta = mj.value("arpf_eta", 1e-4);
    cfg.method.arpf_t_safe = mj.value("arpf_t_safe", 0.1);
    cfg.method.remap_start = mj.value("remap_start", false);
    if (mj.contains("friction")) {
      const auto& fj = mj.at("friction");
      const auto mode = fj.value("mode", "disabled");
      cfg.method.friction.mode = mode == "constant"   ? modulate::FrictionMode::Constant
                                 : mode == "distance" ? modulate::FrictionMode::Distance
                                                      : modulate::FrictionMode::Disabled;
      cfg.method.friction.eta = fj.value("eta", 1.0);
      cfg.method.friction.beta_f = fj.value("beta_f", 5.0);
    }
  }

  if (j.contains("barrier")) {
    const auto& bj = j.at("barrier");
    cfg.barrier.s_grad = bj.value("s_grad", 0.1);
    cfg.barrier.t_save = bj.value("t_save", 0.1);
    cfg.barrier.swept = barrier::swept_mode_from_string(bj.value("swept", "none"));
    cfg.barrier.combine = bj.value("combine", true);
    cfg.barrier.b_cap = bj.value("b_cap", 1e3);
  }

  if (j.contains("flow")) {
    const auto& fj = j.at("flow");
    cfg.flow_horizon = fj.value("horizon", 1.0);
    if (fj.contains("solver")) cfg.flow_solver = solver_from_json(fj.at("solver"));
    cfg.jac_method = diffeo::jac_method_from_string(fj.value("jac_method", "finite_difference"));
  }

  if (j.contains("rollout")) {
    const auto& rj = j.at("rollout");
    cfg.rollout.dt = rj.value("dt", 0.02);
    cfg.rollout.max_steps = rj.value("max_steps", 1500);
    cfg.rollout.goal_tol = rj.value("goal_tol", 0.02);
    if (rj.contains("starts")) {
      for (const auto& sj : rj.at("starts")) {
        StateVec s(static_cast<Eigen::Index>(sj.size()));
        for (Eigen::Index i = 0; i < s.size(); ++i) s[i] = sj.at(static_cast<std::size_t>(i)).get<double>();
        cfg.rollout.starts.push_back(std::move(s));
      }
    }
  }

  // environment override for reproducibility sweeps
  if (const char* env = std::getenv("SDTLAB_SEED")) {
    cfg.seed = std::strtoull(env, nullptr, 10);
    cfg.demos.seed = cfg.seed;
  }
  cfg.validate();
  return cfg;
}

nlohmann::json scenario_to_json(const ScenarioConfig& cfg) {
  nlohmann::json j;
  j["schema_version"] = 1;
  j["scenario_id"] = cfg.scenario_id;
  j["seed"] = cfg.seed;
  j["trials"] = cfg.trials;
  j["demos"] = {{"kind", to_string(cfg.demos.kind)},
                {"n_demos", cfg.demos.n_demos},
                {"samples", cfg.demos.samples},
                {"duration", cfg.demos.duration},
                {"noise", cfg.demos.noise},
                {"seed", cfg.demos.seed},
                {"scale", cfg.demos.scale},
                {"amplitude", cfg.demos.amplitude},
                {"start_jitter", cfg.demos.start_jitter},
                {"target", {cfg.demos.target.x(), cfg.demos.target.y()}}};
  if (!cfg.demo_csvs.empty()) j["demo_csvs"] = cfg.demo_csvs;
  j["dynamics"] = {{"kind", cfg.dynamics.kind}, {"rate", cfg.dynamics.rate}, {"checkpoint", cfg.dynamics.checkpoint}};
  if (!cfg.obstacle.shape.is_null()) {
    j["obstacle"]["shape"] = cfg.obstacle.shape;
    if (cfg.obstacle.jitter_lo && cfg.obstacle.jitter_hi) {
      j["obstacle"]["jitter"] = {{"lo", {cfg.obstacle.jitter_lo->x(), cfg.obstacle.jitter_lo->y()}},
                                 {"hi", {cfg.obstacle.jitter_hi->x(), cfg.obstacle.jitter_hi->y()}}};
    }
  }
  j["method"] = {{"name", modulate::to_string(cfg.method.method)},
                 {"mm_p", cfg.method.mm_p},
                 {"arpf_eta", cfg.method.arpf_eta},
                 {"arpf_t_safe", cfg.method.arpf_t_safe},
                 {"remap_start", cfg.method.remap_start},
                 {"friction",
                  {{"mode", cfg.method.friction.mode == modulate::FrictionMode::Constant   ? "constant"
                            : cfg.method.friction.mode == modulate::FrictionMode::Distance ? "distance"
                                                                                           : "disabled"},
                   {"eta", cfg.method.friction.eta},
                   {"beta_f", cfg.method.friction.beta_f}}}};
  j["barrier"] = {{"s_grad", cfg.barrier.s_grad},
                  {"t_save", cfg.barrier.t_save},
                  {"swept", barrier::to_string(cfg.barrier.swept)},
                  {"combine", cfg.barrier.combine},
                  {"b_cap", cfg.barrier.b_cap}};
  j["flow"] = {{"horizon", cfg.flow_horizon},
               {"solver", solver_to_json(cfg.flow_solver)},
               {"jac_method", diffeo::to_string(cfg.jac_method)}};
  j["rollout"] = {{"dt", cfg.rollout.dt}, {"max_steps", cfg.rollout.max_steps}, {"goal_tol", cfg.rollout.goal_tol}};
  if (!cfg.rollout.starts.empty()) {
    auto arr = nlohmann::json::array();
    for (const auto& s : cfg.rollout.starts)
      arr.push_back(std::vector<double>(s.data(), s.data() + s.size()));
    j["rollout"]["starts"] = arr;
  }
  return j;
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open scenario config: " + path.string());
  nlohmann::json j;
  is >> j;
  return scenario_from_json(j);
}

ResolvedDynamics resolve_dynamics(const ScenarioConfig& cfg) {
  ResolvedDynamics dyn;

  ncds::DemoBatch batch;
  if (!cfg.demo_csvs.empty()) {
    std::vector<Trajectory> trajs;
    for (const auto& p : cfg.demo_csvs) trajs.push_back(read_trajectory_csv(p));
    batch = ncds::demo_batch_from_trajectories(trajs, cfg.demos.samples);
  } else {
    batch = synth_demos(cfg.demos);
  }
  dyn.goal = batch.demos.front().back();
  for (const auto& demo : batch.demos) dyn.starts.push_back(demo.front());

  if (cfg.dynamics.kind == "analytic_linear") {
    const StateVec goal = dyn.goal;
    const double rate = cfg.dynamics.rate;
    dyn.base = [goal, rate](const StateVec& x) -> StateVec { return -rate * (x - goal); };
  } else if (cfg.dynamics.kind == "ncds") {
    if (cfg.dynamics.checkpoint.empty()) throw std::runtime_error("scenario: ncds dynamics needs a checkpoint path");
    dyn.base = ncds::as_field(ncds::load_model(cfg.dynamics.checkpoint));
  } else {
    throw std::runtime_error("scenario: unknown dynamics kind '" + cfg.dynamics.kind + "'");
  }
  return dyn;
}

Trajectory rollout_base(const VectorField& base, const StateVec& start, const RolloutConfig& cfg,
                        const StateVec& goal) {
  Trajectory traj;
  StateVec y = start;
  traj.push_back(0.0, y);
  for (int step = 0; step < cfg.max_steps; ++step) {
    y = y + cfg.dt * base(y);
    if (!y.allFinite()) break;
    traj.push_back(cfg.dt * (step + 1), y);
    if ((y - goal).norm() < cfg.goal_tol) break;
  }
  return traj;
}

Trajectory rollout_modulated(const modulate::ModulatedSystem& sys, const StateVec& start,
                             const RolloutConfig& cfg, const StateVec& goal,
                             std::vector<std::string>* events, diffeo::FlowStats* stats,
                             std::vector<double>* step_times_ms) {
  auto note = [&](const std::string& e) {
    if (events) events->push_back(e);
  };

  Trajectory traj;
  StateVec y = start;
  if (sys.cfg.remap_start) y = diffeo::flow_inverse(sys.flow, y, stats);
  traj.push_back(0.0, y);

  bool below_threshold_noted = false;
  for (int step = 0; step < cfg.max_steps; ++step) {
    StateVec v;
    const auto t0 = Clock::now();
    try {
      v = modulate::modulated_velocity(sys, y, stats);
    } catch (const modulate::SingularJacobianError& err) {
      note(std::string("singular_jacobian: ") + err.what());
      break;
    } catch (const std::exception& err) {
      note(std::string("velocity_error: ") + err.what());
      break;
    }
    if (step_times_ms) step_times_ms->push_back(ms_since(t0));
    if (!v.allFinite()) {
      note("non_finite_velocity");
      break;
    }
    y = y + cfg.dt * v;
    traj.push_back(cfg.dt * (step + 1), y);

    const double gamma = sys.flow.field->value(y);
    if (gamma < 0.0) {
      note("collision");
      break;
    }
    if (!below_threshold_noted && gamma < sys.flow.barrier.t_save) {
      note("below_t_save");
      below_threshold_noted = true;
    }
    if ((y - goal).norm() < cfg.goal_tol) break;
  }
  return traj;
}

ScenarioReport run_scenario(const ScenarioConfig& cfg) { return run_scenario(cfg, resolve_dynamics(cfg)); }

ScenarioReport run_scenario(const ScenarioConfig& cfg, const ResolvedDynamics& dynamics) {
  cfg.validate();
  if (cfg.obstacle.shape.is_null()) throw std::runtime_error("scenario: missing obstacle shape");
  if (dynamics.starts.empty()) throw std::runtime_error("scenario: no rollout start states");

  ScenarioReport report;
  report.scenario_id = cfg.scenario_id;
  report.method = method_label(cfg);
  report.s_grad = cfg.barrier.s_grad;

  for (int trial = 0; trial < cfg.trials; ++trial) {
    TrialResult tr;
    tr.trial = trial;

    // obstacle pose jitter, seeded per trial
    nlohmann::json shape = cfg.obstacle.shape;
    if (cfg.obstacle.jitter_lo && cfg.obstacle.jitter_hi) {
      std::mt19937_64 rng(cfg.seed + 0x517cc1b727220a95ull * (trial + 1));
      std::uniform_real_distribution<double> ux(cfg.obstacle.jitter_lo->x(), cfg.obstacle.jitter_hi->x());
      std::uniform_real_distribution<double> uy(cfg.obstacle.jitter_lo->y(), cfg.obstacle.jitter_hi->y());
      shape = translate_shape(shape, {ux(rng), uy(rng)});
    }
    tr.obstacle = shape;
    const sdf::FieldPtr field = sdf::field_from_json(shape);
    report.sdf_kind = field->kind();

    modulate::ModulatedSystem sys;
    sys.base = dynamics.base;
    sys.flow.field = field;
    sys.flow.barrier = cfg.barrier;
    sys.flow.horizon = cfg.flow_horizon;
    sys.flow.solver = cfg.flow_solver;
    sys.flow.jac_method = cfg.jac_method;
    sys.cfg = cfg.method;

    const std::vector<StateVec>& starts =
        cfg.rollout.starts.empty() ? dynamics.starts : cfg.rollout.starts;
    const StateVec start = starts[trial % starts.size()];

    diffeo::FlowStats stats;
    std::vector<double> step_times;
    tr.modulated = rollout_modulated(sys, start, cfg.rollout, dynamics.goal, &tr.events, &stats, &step_times);
    tr.base = rollout_base(dynamics.base, start, cfg.rollout, dynamics.goal);

    for (const auto& e : tr.events)
      if (e == "collision" || e.rfind("singular_jacobian", 0) == 0 || e == "non_finite_velocity") tr.failed = true;
    tr.events.push_back("flow_stats: field_evals=" + std::to_string(stats.field_evals) +
                        " saturation_hits=" + std::to_string(stats.saturation_hits) +
                        " condition_warnings=" + std::to_string(stats.condition_warnings));

    // timings: median over a handful of isolated calls at the start state
    {
      diffeo::FlowMap map = sys.flow;
      if (map.barrier.swept != barrier::SweptMode::None) map.swept_field = sys.base;
      std::vector<double> tf, tj;
      for (int r = 0; r < 5; ++r) {
        auto t0 = Clock::now();
        (void)diffeo::flow_forward(map, start);
        tf.push_back(ms_since(t0));
        t0 = Clock::now();
        (void)diffeo::flow_jacobian(map, start);
        tj.push_back(ms_since(t0));
      }
      tr.t_flow_ms = median(tf);
      tr.t_jac_ms = median(tj);
      tr.t_step_ms = median(step_times);
    }

    // metric suite (partial trajectories may make individual metrics undefined)
    const auto quiet = std::numeric_limits<double>::quiet_NaN();
    tr.metrics = {quiet, quiet, quiet, quiet, quiet};
    auto guard = [&tr](const char* name, auto&& fn) {
      try {
        fn();
      } catch (const std::exception& e) {
        tr.events.push_back(std::string("metric_error:") + name + ": " + e.what());
      }
    };
    const VectorField f_m = [&sys](const StateVec& x) { return modulate::modulated_velocity(sys, x); };
    guard("rfc", [&] { tr.metrics.rfc = metrics::rfc(tr.base, tr.modulated); });
    guard("vm", [&] { tr.metrics.vm = metrics::vm(sys.base, f_m, tr.modulated); });
    guard("dtwd", [&] { tr.metrics.dtwd = metrics::dtwd(tr.base, tr.modulated); });
    guard("mj", [&] { tr.metrics.mj = metrics::mj(tr.base, tr.modulated); });
    guard("d_min", [&] { tr.metrics.d_min = metrics::d_min(tr.modulated, *field); });

    report.trials.push_back(std::move(tr));
  }
  return report;
}

Eigen::Vector2d nearest_scene_point(const sdf::ArticulatedBody& body, const StateVec& q,
                                    const std::vector<Eigen::Vector2d>& scene_points) {
  if (scene_points.empty()) throw std::invalid_argument("nearest_scene_point: empty scene");
  double best = std::numeric_limits<double>::infinity();
  Eigen::Vector2d arg = scene_points.front();
  for (const auto& s : scene_points) {
    const double d = sdf::articulated_eval(body, q, s);
    if (d < best) {
      best = d;
      arg = s;
    }
  }
  return arg;
}

}  // namespace sdt::harness
