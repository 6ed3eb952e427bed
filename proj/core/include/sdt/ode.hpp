#pragma once

#include "sdt/types.hpp"

namespace sdt {

/// Integrates dx/dt = field(x) over [0, horizon] from x0.
///
/// Convex takes the single explicit step x0 + horizon * field(x0) (valid only
/// when one step is a good approximation of the integral curve, e.g. around
/// convex obstacle surfaces). Euler takes `steps` first-order steps. RK4 uses
/// the 3/8-rule tableau by default; the classic tableau is available through
/// SolverKind::rk4_rule.
///
/// A non-finite field output aborts the integration; the result carries the
/// finite prefix and `aborted = true`.
IntegrationResult integrate_ode(const VectorField& field, const StateVec& x0, double horizon,
                                const SolverKind& solver);

/// Single solver step of size h from x. Shared by the ODE and flow machinery.
StateVec ode_step(const VectorField& field, const StateVec& x, double h, const SolverKind& solver,
                  bool* finite_ok = nullptr);

}  // namespace sdt
