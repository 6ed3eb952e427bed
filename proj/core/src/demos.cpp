#include "sdt/harness/demos.hpp"

#include <cmath>
#include <random>

namespace sdt::harness {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

const char* to_string(DemoKind k) {
  switch (k) {
    case DemoKind::Sine: return "sine";
    case DemoKind::Line: return "line";
    case DemoKind::Arc: return "arc";
    case DemoKind::SCurve: return "s_curve";
  }
  return "?";
}

DemoKind demo_kind_from_string(const std::string& s) {
  if (s == "sine") return DemoKind::Sine;
  if (s == "line") return DemoKind::Line;
  if (s == "arc") return DemoKind::Arc;
  if (s == "s_curve") return DemoKind::SCurve;
  throw std::invalid_argument("unknown demo kind: " + s);
}

Eigen::Vector2d synth_base_point(const SynthDemoConfig& cfg, double u) {
  Eigen::Vector2d p;
  switch (cfg.kind) {
    case DemoKind::Sine:
      p = {cfg.scale * u, cfg.amplitude * u * std::sin(2.5 * kPi * u)};
      break;
    case DemoKind::Line:
      p = {cfg.scale * u, 0.0};
      break;
    case DemoKind::Arc: {
      const double theta = 0.5 * kPi * u;
      p = {cfg.scale * std::sin(theta), cfg.scale * (1.0 - std::cos(theta))};
      break;
    }
    case DemoKind::SCurve:
      p = {cfg.scale * u, cfg.amplitude * u * std::sin(2.0 * kPi * u)};
      break;
  }
  return cfg.target + p;
}

double synth_progress(double s) { return std::pow(1.0 - s, 1.5); }

ncds::DemoBatch synth_demos(const SynthDemoConfig& cfg) {
  if (cfg.n_demos < 1) throw std::invalid_argument("synth_demos: n_demos must be >= 1");
  if (cfg.samples < 2) throw std::invalid_argument("synth_demos: samples must be >= 2");

  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);

  ncds::DemoBatch batch;
  batch.dt = cfg.duration / (cfg.samples - 1);
  for (int i = 0; i < cfg.n_demos; ++i) {
    // transverse-only jitter keeps the family non-crossing, so the velocity
    // target stays single-valued; the progress envelope tapers the speed to
    // zero at the shared target
    const Eigen::Vector2d offset(0.0, cfg.start_jitter * cfg.scale * uni(rng));
    std::vector<StateVec> demo(cfg.samples);
    for (int kx = 0; kx < cfg.samples; ++kx) {
      const double s = static_cast<double>(kx) / (cfg.samples - 1);
      const double u = synth_progress(s);
      Eigen::Vector2d p = synth_base_point(cfg, u) + u * offset;
      if (cfg.noise > 0.0) p += cfg.noise * u * Eigen::Vector2d(gauss(rng), gauss(rng));
      StateVec state(2);
      state << p.x(), p.y();
      demo[kx] = std::move(state);
    }
    batch.demos.push_back(std::move(demo));
  }
  return batch;
}

}  // namespace sdt::harness
