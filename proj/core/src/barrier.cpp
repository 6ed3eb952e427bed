#include "sdt/barrier.hpp"

namespace sdt::barrier {

const char* to_string(SweptMode m) {
  switch (m) {
    case SweptMode::None: return "none";
    case SweptMode::Robot: return "robot";
    case SweptMode::Scene: return "scene";
  }
  return "?";
}

SweptMode swept_mode_from_string(const std::string& s) {
  if (s == "none") return SweptMode::None;
  if (s == "robot") return SweptMode::Robot;
  if (s == "scene") return SweptMode::Scene;
  throw std::invalid_argument("unknown swept mode: " + s);
}

void BarrierConfig::validate() const {
  if (!(s_grad > 0.0)) throw std::invalid_argument("barrier: s_grad must be > 0");
  if (t_save < 0.0) throw std::invalid_argument("barrier: t_save must be >= 0");
  if (!(b_cap > 0.0)) throw std::invalid_argument("barrier: b_cap must be > 0");
}

double b_inv(double gamma, const BarrierConfig& cfg, bool* saturated) {
  if (saturated) *saturated = false;
  if (gamma <= cfg.t_save) {
    if (saturated) *saturated = true;
    return cfg.b_cap;
  }
  const double raw = cfg.s_grad / (gamma - cfg.t_save);
  if (raw >= cfg.b_cap) {
    if (saturated) *saturated = true;
    return cfg.b_cap;
  }
  return std::max(raw, 0.0);
}

double b_swept(const StateVec& v, const StateVec& g, SweptMode mode) {
  if (mode == SweptMode::None) return 1.0;
  const double vn = v.size() == 0 ? 0.0 : v.norm();
  const double gn = g.norm();
  if (vn < 1e-12 || gn < 1e-12) return 1.0;  // no direction information: full barrier
  const double cosv = v.dot(g) / (vn * gn);
  return mode == SweptMode::Robot ? 0.5 * (1.0 + cosv) : 0.5 * (1.0 - cosv);
}

double barrier_value(double gamma, const StateVec& v_base, const StateVec& g,
                     const BarrierConfig& cfg, bool* saturated) {
  const double inv = b_inv(gamma, cfg, saturated);
  if (cfg.swept == SweptMode::None) return inv;
  const double swept = b_swept(v_base, g, cfg.swept);
  return cfg.combine ? inv * swept : swept;
}

StateVec generator(const sdf::SdfField& field, const BarrierConfig& cfg, const StateVec& q,
                   const StateVec& v_base, BarrierStats* stats) {
  const double gamma = field.value(q);
  const StateVec grad = field.gradient(q);
  bool saturated = false;
  const double b = barrier_value(gamma, v_base, grad, cfg, &saturated);
  if (stats && saturated) stats->saturation_hits += 1;
  return -b * grad;
}

}  // namespace sdt::barrier
