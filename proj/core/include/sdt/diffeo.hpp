#pragma once

#include "sdt/barrier.hpp"
#include "sdt/sdf/field.hpp"
#include "sdt/types.hpp"

namespace sdt::diffeo {

enum class JacMethod { FiniteDifference, ForwardSensitivity };

const char* to_string(JacMethod m);
JacMethod jac_method_from_string(const std::string& s);

/// Fixed-time map of the flow of V = -b * grad(Gamma). The map is immutable;
/// all queries are pure.
struct FlowMap {
  sdf::FieldPtr field;
  barrier::BarrierConfig barrier;
  double horizon = 1.0;
  SolverKind solver;  // default RK4, 10 substeps
  JacMethod jac_method = JacMethod::FiniteDifference;

  // swept-factor velocity: when `swept_field` is set it is re-evaluated along
  // the flow (the generator stays autonomous, so one consistent map is used
  // for the whole rollout); otherwise the frozen `v_base` is used
  VectorField swept_field;
  StateVec v_base;

  void validate() const;
};

struct FlowStats {
  long field_evals = 0;
  int saturation_hits = 0;
  int condition_warnings = 0;
};

/// Generator V(q) for this map (barrier-regulated distance gradient).
StateVec generator_at(const FlowMap& map, const StateVec& q, FlowStats* stats = nullptr);

/// psi(y): integrates dq/dt = V(q) from y over [0, horizon].
StateVec flow_forward(const FlowMap& map, const StateVec& y, FlowStats* stats = nullptr);

/// psi^{-1}(q): time-reversed integration.
StateVec flow_inverse(const FlowMap& map, const StateVec& q, FlowStats* stats = nullptr);

/// d(psi)/dy. FiniteDifference: central differences of flow_forward.
/// ForwardSensitivity: integrates the variational equation dJ/dt = (dV/dq) J
/// alongside the flow. Condition number > 1e8 raises a stats warning.
Mat flow_jacobian(const FlowMap& map, const StateVec& y, FlowStats* stats = nullptr);

}  // namespace sdt::diffeo
