#include "sdt/ode.hpp"

namespace sdt {

namespace {

bool eval_finite(const VectorField& f, const StateVec& x, StateVec& out) {
  out = f(x);
  return out.allFinite();
}

}  // namespace

StateVec ode_step(const VectorField& field, const StateVec& x, double h, const SolverKind& solver,
                  bool* finite_ok) {
  auto ok = [&](bool v) {
    if (finite_ok) *finite_ok = v;
  };
  ok(true);
  StateVec k1, k2, k3, k4;
  switch (solver.method) {
    case SolverMethod::Convex:
    case SolverMethod::Euler: {
      if (!eval_finite(field, x, k1)) {
        ok(false);
        return x;
      }
      return x + h * k1;
    }
    case SolverMethod::RungeKutta4: {
      if (solver.rk4_rule == Rk4Rule::ThreeEighths) {
        // 3/8 rule: c = (0, 1/3, 2/3, 1), b = (1/8, 3/8, 3/8, 1/8)
        if (!eval_finite(field, x, k1) || !eval_finite(field, x + (h / 3.0) * k1, k2) ||
            !eval_finite(field, x + h * (-k1 / 3.0 + k2), k3) ||
            !eval_finite(field, x + h * (k1 - k2 + k3), k4)) {
          ok(false);
          return x;
        }
        return x + (h / 8.0) * (k1 + 3.0 * k2 + 3.0 * k3 + k4);
      }
      // classic tableau
      if (!eval_finite(field, x, k1) || !eval_finite(field, x + (h / 2.0) * k1, k2) ||
          !eval_finite(field, x + (h / 2.0) * k2, k3) || !eval_finite(field, x + h * k3, k4)) {
        ok(false);
        return x;
      }
      return x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
  }
  throw std::logic_error("unknown solver method");
}

IntegrationResult integrate_ode(const VectorField& field, const StateVec& x0, double horizon,
                                const SolverKind& solver) {
  if (!(horizon > 0.0)) throw std::invalid_argument("integrate_ode: horizon must be > 0");
  if (solver.steps < 1) throw std::invalid_argument("integrate_ode: steps must be >= 1");

  IntegrationResult res;
  res.trajectory.push_back(0.0, x0);

  const int n = solver.method == SolverMethod::Convex ? 1 : solver.steps;
  const double h = horizon / n;
  StateVec x = x0;
  for (int i = 0; i < n; ++i) {
    bool finite = true;
    StateVec next = ode_step(field, x, h, solver, &finite);
    if (!finite || !next.allFinite()) {
      res.aborted = true;
      return res;
    }
    x = std::move(next);
    res.trajectory.push_back(h * (i + 1), x);
  }
  return res;
}

}  // namespace sdt
