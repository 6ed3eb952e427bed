#pragma once

#include "sdt/diffeo.hpp"
#include "sdt/types.hpp"

namespace sdt::modulate {

enum class Method { SDDC, SDC, Naive, MM, DT, ARPF };

const char* to_string(Method m);
Method method_from_string(const std::string& s);

enum class FrictionMode { Disabled, Constant, Distance };

struct FrictionConfig {
  FrictionMode mode = FrictionMode::Disabled;
  double eta = 1.0;     // Constant mode value
  double beta_f = 5.0;  // Distance mode steepness
};

struct MethodConfig {
  Method method = Method::SDC;
  double mm_p = 1.0;          // MM distance exponent
  double arpf_eta = 1e-4;
  double arpf_t_safe = 0.1;
  FrictionConfig friction;
  bool remap_start = false;   // start rollouts from psi^{-1}(q0)

  /// Throws on invalid combinations; notably constant eta_f = 1 under SDDC,
  /// which only guarantees avoidance at velocity level.
  void validate() const;
};

/// Base contractive field plus the barrier-driven flow and method selection.
struct ModulatedSystem {
  VectorField base;       // f_c
  diffeo::FlowMap flow;   // v_base is filled per evaluation when swept is active
  MethodConfig cfg;
};

struct SingularJacobianError : std::runtime_error {
  SingularJacobianError(double cond);
  double condition_number;
};

// Individual schemes. Each evaluates the flow with the swept velocity frozen
// at the query state.
StateVec sddc_velocity(const ModulatedSystem& sys, const StateVec& y, diffeo::FlowStats* = nullptr);
StateVec sdc_velocity(const ModulatedSystem& sys, const StateVec& y, diffeo::FlowStats* = nullptr);
StateVec dt_velocity(const ModulatedSystem& sys, const StateVec& y, diffeo::FlowStats* = nullptr);
StateVec naive_velocity(const ModulatedSystem& sys, const StateVec& q, diffeo::FlowStats* = nullptr);
StateVec mm_velocity(const ModulatedSystem& sys, const StateVec& x, diffeo::FlowStats* = nullptr);
StateVec arpf_velocity(const ModulatedSystem& sys, const StateVec& x, diffeo::FlowStats* = nullptr);

/// Repulsive potential 0.5 * eta * (1/(gamma - t_safe) - 1)^2 behind
/// arpf_velocity; zero once the margin reaches 1.
double arpf_potential(double gamma, const MethodConfig& cfg);

/// Friction rescaling ydot_f = eta_f (|f_c| / |f_m|) f_m; never changes the
/// direction. Zero v_mod passes through unchanged.
StateVec friction(const StateVec& v_mod, double v_base_norm, double gamma, const MethodConfig& cfg);

/// Dispatch on cfg.method, then apply friction when enabled.
StateVec modulated_velocity(const ModulatedSystem& sys, const StateVec& y,
                            diffeo::FlowStats* = nullptr);

}  // namespace sdt::modulate
