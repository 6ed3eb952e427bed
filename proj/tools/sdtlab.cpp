#include "sdt/harness/bench.hpp"
#include "sdt/harness/report.hpp"
#include "sdt/sdf/primitives.hpp"
#include "sdt/sdf/train.hpp"
#include "sdt/trajectory_io.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <filesystem>
#include <iostream>

namespace fs = std::filesystem;
using namespace sdt;

namespace {

int cmd_train_ncds(const std::vector<std::string>& demo_csvs, const std::string& synth_kind,
                   int epochs, double lr, int samples, int hidden, double eps_init,
                   std::uint64_t seed, double noise_sigma, const std::string& sign_mode,
                   const std::string& out) {
  ncds::DemoBatch batch;
  if (!demo_csvs.empty()) {
    std::vector<Trajectory> trajs;
    for (const auto& p : demo_csvs) trajs.push_back(read_trajectory_csv(p));
    batch = ncds::demo_batch_from_trajectories(trajs, samples);
  } else {
    harness::SynthDemoConfig dcfg;
    dcfg.kind = harness::demo_kind_from_string(synth_kind);
    dcfg.samples = samples;
    dcfg.seed = seed;
    batch = harness::synth_demos(dcfg);
  }

  ncds::NcdsModel model = ncds::make_model(batch, {hidden, hidden}, eps_init, seed);
  ncds::TrainConfig cfg;
  cfg.epochs = epochs;
  cfg.lr = lr;
  cfg.seed = seed;
  cfg.loss.noise_sigma = noise_sigma;
  cfg.loss.sign_mode =
      sign_mode == "paper_verbatim" ? ncds::LossSignMode::PaperVerbatim : ncds::LossSignMode::Corrected;

  const ncds::TrainResult result = ncds::train(std::move(model), batch, cfg);
  if (result.aborted) std::cerr << "warning: training aborted on non-finite loss; saving last finite checkpoint\n";
  ncds::save_model(result.model, out);
  std::cout << "trained " << epochs << " epochs";
  if (!result.loss_curve.empty())
    std::cout << ", loss " << result.loss_curve.front() << " -> " << result.loss_curve.back();
  std::cout << "\nwrote " << out << "\n";
  return result.aborted ? 1 : 0;
}

sdf::FieldPtr make_shape(const std::string& name) {
  if (name == "circle") return std::make_shared<sdf::CircleSdf>(Eigen::Vector2d(0.0, 0.0), 0.6);
  if (name == "box")
    return std::make_shared<sdf::BoxSdf>(Eigen::Vector2d(0.0, 0.0), Eigen::Vector2d(0.5, 0.35));
  if (name == "triangle")
    return std::make_shared<sdf::TriangleSdf>(Eigen::Vector2d(-0.5, -0.4), Eigen::Vector2d(0.5, -0.4),
                                              Eigen::Vector2d(0.0, 0.5));
  if (name == "arc") return std::make_shared<sdf::ArcSdf>(Eigen::Vector2d(0.0, 0.0), 0.6, 0.0, 3.6, 0.12);
  throw std::runtime_error("unknown shape '" + name + "' (circle|box|triangle|arc)");
}

int cmd_train_sdf(const std::string& shape, const std::string& model, int n_samples, int epochs,
                  double lr, int degree, std::uint64_t seed, const std::string& out,
                  const std::string& dump_train_csv) {
  const sdf::FieldPtr target = make_shape(shape);
  sdf::Bounds bounds;
  bounds.lo = (StateVec(2) << -2.0, -2.0).finished();
  bounds.hi = (StateVec(2) << 2.0, 2.0).finished();
  const sdf::TrainSet set = sdf::sample_train_set(*target, bounds, n_samples, seed);
  if (!dump_train_csv.empty()) sdf::write_train_set_csv(dump_train_csv, set);

  sdf::SdfTrainConfig cfg;
  cfg.epochs = epochs;
  cfg.lr = lr;
  cfg.seed = seed;

  sdf::FieldPtr trained;
  if (model == "mlp") {
    trained = std::make_shared<sdf::MlpSdf>(sdf::train_mlp_sdf(set, {64, 32, 16}, cfg));
  } else if (model == "bp") {
    trained = std::make_shared<sdf::BernsteinSdf>(sdf::train_bernstein_sdf(set, degree, cfg));
  } else {
    throw std::runtime_error("unknown model '" + model + "' (mlp|bp)");
  }

  const sdf::TrainSet holdout = sdf::sample_train_set(*target, bounds, 2000, seed + 1);
  std::cout << "held-out mean |pred - d|: " << sdf::mean_abs_error(*trained, holdout) << "\n";
  std::cout << "exterior-band mean eikonal residual: "
            << sdf::mean_eikonal_residual(*trained, holdout, 0.05, 1.0) << "\n";
  sdf::save_field(*trained, out);
  std::cout << "wrote " << out << "\n";
  return 0;
}

int cmd_run(const std::string& config, const std::string& out_dir) {
  const harness::ScenarioConfig cfg = harness::load_scenario(config);
  const harness::ScenarioReport report = harness::run_scenario(cfg);

  fs::create_directories(out_dir);
  harness::export_report(report, fs::path(out_dir) / "report.csv", harness::ReportFormat::Csv);
  harness::export_report(report, fs::path(out_dir) / "report.json", harness::ReportFormat::Json);
  for (const auto& tr : report.trials) {
    write_trajectory_csv(fs::path(out_dir) / ("trial" + std::to_string(tr.trial) + "_base.csv"), tr.base);
    write_trajectory_csv(fs::path(out_dir) / ("trial" + std::to_string(tr.trial) + "_mod.csv"), tr.modulated);
  }

  int failed = 0;
  for (const auto& tr : report.trials) failed += tr.failed ? 1 : 0;
  std::cout << report.trials.size() << " trials, " << failed << " failed; reports in " << out_dir << "\n";
  return 0;
}

int cmd_bench(const std::string& config, int repeats, const std::string& out) {
  const harness::ScenarioConfig cfg = harness::load_scenario(config);
  const auto rows = harness::bench_timing(cfg, repeats);
  const std::string csv = harness::timing_csv(rows);
  std::cout << csv;
  if (!out.empty()) {
    harness::write_timing_csv(out, rows);
    std::cout << "wrote " << out << "\n";
  }
  return 0;
}

int cmd_metrics(const std::string& base_csv, const std::string& mod_csv, const std::string& obstacle) {
  const Trajectory base = read_trajectory_csv(base_csv);
  const Trajectory mod = read_trajectory_csv(mod_csv);
  std::cout << "dtwd: " << metrics::dtwd(base, mod) << "\n";
  std::cout << "rfc:  " << metrics::rfc(base, mod) << "\n";
  std::cout << "mj:   " << metrics::mj(base, mod) << "\n";
  if (!obstacle.empty()) {
    const sdf::FieldPtr field = sdf::load_field(obstacle);
    std::cout << "d_min: " << metrics::d_min(mod, *field) << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Contraction-preserving obstacle avoidance benchmark lab"};
  app.require_subcommand(1);

  // train-ncds
  std::vector<std::string> demo_csvs;
  std::string synth_kind = "sine", sign_mode = "corrected", out_path = "model.json";
  int epochs = 500, samples = 200, hidden = 64;
  double lr = 1e-3, eps_init = 0.05, noise_sigma = 0.0;
  std::uint64_t seed = 0;
  auto* train_ncds = app.add_subcommand("train-ncds", "Train a contractive dynamics model on demonstrations");
  train_ncds->add_option("--demos", demo_csvs, "Demonstration CSV files (t,x1,...,xD)");
  train_ncds->add_option("--synthetic", synth_kind, "Synthetic demo family when no CSVs are given");
  train_ncds->add_option("--epochs", epochs, "Training epochs");
  train_ncds->add_option("--lr", lr, "Learning rate");
  train_ncds->add_option("--samples", samples, "Resampled points per demonstration");
  train_ncds->add_option("--hidden", hidden, "Hidden width (two hidden layers)");
  train_ncds->add_option("--eps-init", eps_init, "Initial eigenvalue bound");
  train_ncds->add_option("--noise-sigma", noise_sigma, "Orthogonal noise sigma for the robustness loss");
  train_ncds->add_option("--sign-mode", sign_mode, "Loss sign convention: corrected|paper_verbatim");
  train_ncds->add_option("--seed", seed, "RNG seed");
  train_ncds->add_option("--out", out_path, "Output checkpoint path");

  // train-sdf
  std::string sdf_shape = "circle", sdf_model = "mlp", sdf_out = "field.json", dump_train;
  int sdf_samples = 20000, sdf_epochs = 200, sdf_degree = 8;
  double sdf_lr = 1e-3;
  std::uint64_t sdf_seed = 0;
  auto* train_sdf = app.add_subcommand("train-sdf", "Train an implicit distance field for a primitive shape");
  train_sdf->add_option("--shape", sdf_shape, "circle|box|triangle|arc");
  train_sdf->add_option("--model", sdf_model, "mlp|bp");
  train_sdf->add_option("--samples", sdf_samples, "Training samples");
  train_sdf->add_option("--epochs", sdf_epochs, "Training epochs");
  train_sdf->add_option("--lr", sdf_lr, "Learning rate");
  train_sdf->add_option("--degree", sdf_degree, "Bernstein degree (bp model)");
  train_sdf->add_option("--seed", sdf_seed, "RNG seed");
  train_sdf->add_option("--out", sdf_out, "Output checkpoint path");
  train_sdf->add_option("--dump-train-csv", dump_train, "Also write the sampled training set");

  // run
  std::string run_config, run_out = "report";
  auto* run = app.add_subcommand("run", "Run an obstacle-avoidance scenario and export reports");
  run->add_option("--config", run_config, "Scenario JSON")->required();
  run->add_option("--out", run_out, "Output directory");

  // bench
  std::string bench_config, bench_out;
  int repeats = 50;
  auto* bench = app.add_subcommand("bench", "Time flow/Jacobian/step per solver kind");
  bench->add_option("--config", bench_config, "Scenario JSON")->required();
  bench->add_option("--repeats", repeats, "Repeats per timing (>= 10)");
  bench->add_option("--out", bench_out, "Optional CSV output path");

  // metrics
  std::string m_base, m_mod, m_obstacle;
  auto* metrics_cmd = app.add_subcommand("metrics", "Compare two trajectory CSVs");
  metrics_cmd->add_option("--base", m_base, "Base trajectory CSV")->required();
  metrics_cmd->add_option("--mod", m_mod, "Modulated trajectory CSV")->required();
  metrics_cmd->add_option("--obstacle", m_obstacle, "Obstacle field JSON (enables d_min)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (train_ncds->parsed())
      return cmd_train_ncds(demo_csvs, synth_kind, epochs, lr, samples, hidden, eps_init, seed,
                            noise_sigma, sign_mode, out_path);
    if (train_sdf->parsed())
      return cmd_train_sdf(sdf_shape, sdf_model, sdf_samples, sdf_epochs, sdf_lr, sdf_degree, sdf_seed,
                           sdf_out, dump_train);
    if (run->parsed()) return cmd_run(run_config, run_out);
    if (bench->parsed()) return cmd_bench(bench_config, repeats, bench_out);
    if (metrics_cmd->parsed()) return cmd_metrics(m_base, m_mod, m_obstacle);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
