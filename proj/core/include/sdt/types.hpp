#pragma once

#include <Eigen/Core>

#include <functional>
#include <stdexcept>
#include <vector>

namespace sdt {

/// D-dimensional state (position in joint or task coordinates).
using StateVec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Autonomous first-order dynamics x -> dx/dt.
using VectorField = std::function<StateVec(const StateVec&)>;

/// Ordered, time-stamped sequence of states.
struct Trajectory {
  std::vector<double> times;
  std::vector<StateVec> states;

  std::size_t size() const { return times.size(); }
  bool empty() const { return times.empty(); }
  int dim() const { return states.empty() ? 0 : static_cast<int>(states.front().size()); }
  double duration() const { return times.empty() ? 0.0 : times.back() - times.front(); }
  const StateVec& front_state() const { return states.front(); }
  const StateVec& back_state() const { return states.back(); }

  void push_back(double t, StateVec x) {
    times.push_back(t);
    states.push_back(std::move(x));
  }

  /// Throws if timestamps are not strictly increasing or dimensions disagree.
  void validate() const;
};

enum class SolverMethod { Convex, Euler, RungeKutta4 };

enum class Rk4Rule { ThreeEighths, Classic };

/// Fixed-step ODE solver selection. `steps` is ignored by Convex.
struct SolverKind {
  SolverMethod method = SolverMethod::RungeKutta4;
  int steps = 10;
  Rk4Rule rk4_rule = Rk4Rule::ThreeEighths;
};

struct IntegrationResult {
  Trajectory trajectory;
  bool aborted = false;  // non-finite field output; trajectory holds the finite prefix
};

inline bool all_finite(const StateVec& v) { return v.allFinite(); }

}  // namespace sdt
