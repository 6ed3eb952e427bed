#include "sdt/diffeo.hpp"

#include "sdt/ode.hpp"

#include <Eigen/SVD>

namespace sdt::diffeo {

namespace {

VectorField make_generator_field(const FlowMap& map, double sign, FlowStats* stats) {
  return [&map, sign, stats](const StateVec& q) -> StateVec {
    if (stats) stats->field_evals += 1;
    const double gamma = map.field->value(q);
    const StateVec grad = map.field->gradient(q);
    bool saturated = false;
    const StateVec v = map.barrier.swept != barrier::SweptMode::None && map.swept_field
                           ? map.swept_field(q)
                           : map.v_base;
    const double b = barrier::barrier_value(gamma, v, grad, map.barrier, &saturated);
    if (stats && saturated) stats->saturation_hits += 1;
    return (-sign * b) * grad;
  };
}

StateVec integrate_endpoint(const VectorField& f, const StateVec& x0, double horizon,
                            const SolverKind& solver) {
  if (horizon == 0.0) return x0;
  const IntegrationResult res = integrate_ode(f, x0, horizon, solver);
  if (res.aborted) throw std::runtime_error("flow: non-finite generator evaluation along the path");
  return res.trajectory.back_state();
}

}  // namespace

const char* to_string(JacMethod m) {
  return m == JacMethod::FiniteDifference ? "finite_difference" : "forward_sensitivity";
}

JacMethod jac_method_from_string(const std::string& s) {
  if (s == "finite_difference") return JacMethod::FiniteDifference;
  if (s == "forward_sensitivity") return JacMethod::ForwardSensitivity;
  throw std::invalid_argument("unknown jacobian method: " + s);
}

void FlowMap::validate() const {
  if (!field) throw std::invalid_argument("flow map: missing field");
  if (horizon < 0.0) throw std::invalid_argument("flow map: horizon must be >= 0");
  if (solver.steps < 1) throw std::invalid_argument("flow map: solver steps must be >= 1");
  barrier.validate();
}

StateVec generator_at(const FlowMap& map, const StateVec& q, FlowStats* stats) {
  return make_generator_field(map, 1.0, stats)(q);
}

StateVec flow_forward(const FlowMap& map, const StateVec& y, FlowStats* stats) {
  return integrate_endpoint(make_generator_field(map, 1.0, stats), y, map.horizon, map.solver);
}

StateVec flow_inverse(const FlowMap& map, const StateVec& q, FlowStats* stats) {
  return integrate_endpoint(make_generator_field(map, -1.0, stats), q, map.horizon, map.solver);
}

Mat flow_jacobian(const FlowMap& map, const StateVec& y, FlowStats* stats) {
  const auto d = y.size();
  Mat J(d, d);

  if (map.jac_method == JacMethod::FiniteDifference) {
    const double h = 1e-6 * std::max(1.0, y.cwiseAbs().maxCoeff());
    for (Eigen::Index j = 0; j < d; ++j) {
      StateVec yp = y, ym = y;
      yp[j] += h;
      ym[j] -= h;
      // divide by the realized perturbation, not the nominal one
      J.col(j) = (flow_forward(map, yp, stats) - flow_forward(map, ym, stats)) / (yp[j] - ym[j]);
    }
  } else {
    // variational equation on the augmented state (q, vec(J))
    const VectorField gen = make_generator_field(map, 1.0, stats);
    const double fd = 1e-6 * std::max(1.0, y.cwiseAbs().maxCoeff());
    VectorField aug = [&gen, d, fd](const StateVec& s) -> StateVec {
      const StateVec q = s.head(d);
      Mat A(d, d);  // dV/dq by central differences of the generator
      for (Eigen::Index j = 0; j < d; ++j) {
        StateVec qp = q, qm = q;
        qp[j] += fd;
        qm[j] -= fd;
        A.col(j) = (gen(qp) - gen(qm)) / (2.0 * fd);
      }
      Mat Jcur(d, d);
      for (Eigen::Index c = 0; c < d; ++c) Jcur.col(c) = s.segment(d + c * d, d);
      const Mat Jdot = A * Jcur;
      StateVec out(d + d * d);
      out.head(d) = gen(q);
      for (Eigen::Index c = 0; c < d; ++c) out.segment(d + c * d, d) = Jdot.col(c);
      return out;
    };
    StateVec s0(d + d * d);
    s0.head(d) = y;
    Mat J0 = Mat::Identity(d, d);
    for (Eigen::Index c = 0; c < d; ++c) s0.segment(d + c * d, d) = J0.col(c);
    const StateVec sT = integrate_endpoint(aug, s0, map.horizon, map.solver);
    for (Eigen::Index c = 0; c < d; ++c) J.col(c) = sT.segment(d + c * d, d);
  }

  if (stats) {
    const Eigen::JacobiSVD<Mat> svd(J);
    const double smin = svd.singularValues().minCoeff();
    const double smax = svd.singularValues().maxCoeff();
    if (smin <= 0.0 || smax / smin > 1e8) stats->condition_warnings += 1;
  }
  return J;
}

}  // namespace sdt::diffeo
