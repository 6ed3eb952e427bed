#pragma once

#include "sdt/sdf/field.hpp"
#include "sdt/types.hpp"

namespace sdt::barrier {

enum class SweptMode { None, Robot, Scene };

const char* to_string(SweptMode m);
SweptMode swept_mode_from_string(const std::string& s);

struct BarrierConfig {
  double s_grad = 0.1;
  double t_save = 0.1;
  SweptMode swept = SweptMode::None;
  bool combine = true;   // multiply b_inv * b_swept when swept is active
  double b_cap = 1e3;    // saturation instead of the singular blow-up

  void validate() const;
};

/// Inverse barrier s_grad / (gamma - t_save), clamped to [0, b_cap];
/// gamma <= t_save saturates at b_cap.
double b_inv(double gamma, const BarrierConfig& cfg, bool* saturated = nullptr);

/// Cosine weighting in [0, 1]: robot mode (1 + cos)/2, scene mode (1 - cos)/2.
/// Zero velocity or gradient yields 1 (no direction information).
double b_swept(const StateVec& v, const StateVec& g, SweptMode mode);

/// Combined barrier value for a query with distance gamma and gradient g.
double barrier_value(double gamma, const StateVec& v_base, const StateVec& g,
                     const BarrierConfig& cfg, bool* saturated = nullptr);

struct BarrierStats {
  int saturation_hits = 0;
};

/// Infinitesimal generator V(q) = -b(q) * grad(Gamma)(q). The swept factor,
/// when enabled, uses the frozen base velocity v_base.
StateVec generator(const sdf::SdfField& field, const BarrierConfig& cfg, const StateVec& q,
                   const StateVec& v_base, BarrierStats* stats = nullptr);

}  // namespace sdt::barrier
