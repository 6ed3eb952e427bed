#pragma once

#include "sdt/ncds.hpp"

#include <cstdint>

namespace sdt::harness {

enum class DemoKind { Sine, Line, Arc, SCurve };

const char* to_string(DemoKind k);
DemoKind demo_kind_from_string(const std::string& s);

/// Synthetic 2D demonstration family: smooth curves converging to a common
/// target, with deterministic per-demo initial-condition jitter. A desk-scale
/// stand-in for handwriting-style datasets.
struct SynthDemoConfig {
  DemoKind kind = DemoKind::Sine;
  int n_demos = 5;
  int samples = 200;
  double duration = 5.0;  // seconds
  double noise = 0.0;     // per-sample jitter amplitude (decays to 0 at the target)
  std::uint64_t seed = 0;
  Eigen::Vector2d target = Eigen::Vector2d::Zero();
  double scale = 2.0;      // path extent along x
  double amplitude = 0.5;  // transverse extent
  double start_jitter = 0.15;  // initial-offset spread, relative to scale
};

ncds::DemoBatch synth_demos(const SynthDemoConfig& cfg);

/// Base curve of the family at progress u in [0, 1] (u = 1 start, u = 0 target).
Eigen::Vector2d synth_base_point(const SynthDemoConfig& cfg, double u);

/// Progress u as a function of normalized time s in [0, 1]; tapers so demos
/// decelerate into the target.
double synth_progress(double s);

}  // namespace sdt::harness
