#include "sdt/modulate.hpp"

#include <Eigen/Dense>

#include <cmath>

namespace sdt::modulate {

namespace {

// the swept factor follows the base velocity along the flow, keeping a single
// consistent diffeomorphism across the whole rollout
diffeo::FlowMap flow_at(const ModulatedSystem& sys, const StateVec&) {
  diffeo::FlowMap map = sys.flow;
  if (map.barrier.swept != barrier::SweptMode::None && !map.swept_field) map.swept_field = sys.base;
  return map;
}

Mat checked_inverse(const Mat& J, diffeo::FlowStats* stats) {
  const Eigen::JacobiSVD<Mat> svd(J, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const double smin = svd.singularValues().minCoeff();
  const double smax = svd.singularValues().maxCoeff();
  const double cond = smin > 0.0 ? smax / smin : std::numeric_limits<double>::infinity();
  if (!(smin > 0.0) || cond > 1e12) throw SingularJacobianError(cond);
  if (stats && cond > 1e8) stats->condition_warnings += 1;
  return svd.solve(Mat::Identity(J.rows(), J.cols()));
}

// orthonormal basis with the unit normal first; remaining columns span the
// tangent space (2D: the 90-degree rotation; higher D: Householder complement)
Mat normal_tangent_basis(const StateVec& normal) {
  const auto d = normal.size();
  Mat E(d, d);
  E.col(0) = normal;
  if (d == 2) {
    E(0, 1) = -normal[1];
    E(1, 1) = normal[0];
    return E;
  }
  // Gram-Schmidt of the coordinate axes against the normal and previous columns
  Eigen::Index col = 1;
  for (Eigen::Index j = 0; j < d && col < d; ++j) {
    StateVec cand = StateVec::Zero(d);
    cand[j] = 1.0;
    cand -= normal * normal[j];
    for (Eigen::Index k = 1; k < col; ++k) cand -= E.col(k) * E.col(k).dot(cand);
    if (cand.norm() > 1e-8) E.col(col++) = cand / cand.norm();
  }
  return E;
}

}  // namespace

const char* to_string(Method m) {
  switch (m) {
    case Method::SDDC: return "sddc";
    case Method::SDC: return "sdc";
    case Method::Naive: return "naive";
    case Method::MM: return "mm";
    case Method::DT: return "dt";
    case Method::ARPF: return "arpf";
  }
  return "?";
}

Method method_from_string(const std::string& s) {
  if (s == "sddc") return Method::SDDC;
  if (s == "sdc") return Method::SDC;
  if (s == "naive") return Method::Naive;
  if (s == "mm") return Method::MM;
  if (s == "dt") return Method::DT;
  if (s == "arpf") return Method::ARPF;
  throw std::invalid_argument("unknown modulation method: " + s);
}

void MethodConfig::validate() const {
  if (mm_p < 1.0) throw std::invalid_argument("modulation: MM exponent p must be >= 1");
  if (!(arpf_eta >= 0.0)) throw std::invalid_argument("modulation: ARPF eta must be >= 0");
  if (friction.mode == FrictionMode::Constant && !(friction.eta > 0.0))
    throw std::invalid_argument("modulation: constant friction eta must be > 0");
  if (friction.mode == FrictionMode::Distance && !(friction.beta_f > 0.0))
    throw std::invalid_argument("modulation: friction beta_f must be > 0");
  if (method == Method::SDDC && friction.mode == FrictionMode::Constant && friction.eta == 1.0)
    throw std::invalid_argument(
        "modulation: eta_f = 1 must not be chosen for SDDC (avoidance holds only at velocity level)");
}

SingularJacobianError::SingularJacobianError(double cond)
    : std::runtime_error("flow jacobian is numerically singular (cond " + std::to_string(cond) + ")"),
      condition_number(cond) {}

StateVec sddc_velocity(const ModulatedSystem& sys, const StateVec& y, diffeo::FlowStats* stats) {
  const diffeo::FlowMap map = flow_at(sys, y);
  const Mat J = diffeo::flow_jacobian(map, y, stats);
  return checked_inverse(J, stats) * sys.base(y);
}

StateVec sdc_velocity(const ModulatedSystem& sys, const StateVec& y, diffeo::FlowStats* stats) {
  const diffeo::FlowMap map = flow_at(sys, y);
  const Mat J = diffeo::flow_jacobian(map, y, stats);
  return checked_inverse(J, stats) * sys.base(diffeo::flow_forward(map, y, stats));
}

StateVec dt_velocity(const ModulatedSystem& sys, const StateVec& y, diffeo::FlowStats* stats) {
  const diffeo::FlowMap map = flow_at(sys, y);
  const Mat J = diffeo::flow_jacobian(map, y, stats);
  const Mat G = J.transpose() * J;
  return checked_inverse(G, stats) * sys.base(diffeo::flow_forward(map, y, stats));
}

StateVec naive_velocity(const ModulatedSystem& sys, const StateVec& q, diffeo::FlowStats* stats) {
  const diffeo::FlowMap map = flow_at(sys, q);
  return sys.base(q) + diffeo::generator_at(map, q, stats);
}

StateVec mm_velocity(const ModulatedSystem& sys, const StateVec& x, diffeo::FlowStats* stats) {
  const double gamma = sys.flow.field->value(x);
  if (gamma < 0.0) throw std::runtime_error("mm_velocity: state inside the obstacle");
  const double gamma_m = std::pow(gamma + 1.0, 2.0 * sys.cfg.mm_p);
  if (!(gamma_m > 0.0)) throw std::runtime_error("mm_velocity: non-positive modulation distance");

  StateVec normal = sys.flow.field->gradient(x);
  const double nn = normal.norm();
  if (nn < 1e-12) return sys.base(x);  // tie-broken gradient carries no direction
  normal /= nn;

  const auto d = x.size();
  Eigen::VectorXd lambda(d);
  lambda[0] = 1.0 - 1.0 / gamma_m;
  for (Eigen::Index i = 1; i < d; ++i) lambda[i] = 1.0 + 1.0 / gamma_m;
  const Mat E = normal_tangent_basis(normal);
  const Mat M = E * lambda.asDiagonal() * E.transpose();
  if (stats) stats->field_evals += 2;
  return M * sys.base(x);
}

double arpf_potential(double gamma, const MethodConfig& cfg) {
  const double margin = gamma - cfg.arpf_t_safe;
  if (margin <= 0.0) return std::numeric_limits<double>::infinity();
  const double term = 1.0 / margin - 1.0;
  return 0.5 * cfg.arpf_eta * term * term;
}

StateVec arpf_velocity(const ModulatedSystem& sys, const StateVec& x, diffeo::FlowStats* stats) {
  const double gamma = sys.flow.field->value(x);
  const StateVec grad = sys.flow.field->gradient(x);
  const double margin = gamma - sys.cfg.arpf_t_safe;
  // dV/dGamma = -eta (1/margin - 1) / margin^2, capped by the barrier policy
  double dv_dgamma;
  if (margin <= 0.0) {
    dv_dgamma = -sys.cfg.arpf_eta * sys.flow.barrier.b_cap;
    if (stats) stats->saturation_hits += 1;
  } else {
    dv_dgamma = -sys.cfg.arpf_eta * (1.0 / margin - 1.0) / (margin * margin);
    const double cap = sys.cfg.arpf_eta * sys.flow.barrier.b_cap;
    dv_dgamma = std::clamp(dv_dgamma, -cap, cap);
  }
  if (stats) stats->field_evals += 2;
  return sys.base(x) - dv_dgamma * grad;
}

StateVec friction(const StateVec& v_mod, double v_base_norm, double gamma, const MethodConfig& cfg) {
  cfg.validate();
  const double vm = v_mod.norm();
  if (vm < 1e-15) return v_mod;
  double eta_f = 1.0;
  switch (cfg.friction.mode) {
    case FrictionMode::Disabled: return v_mod;
    case FrictionMode::Constant: eta_f = cfg.friction.eta; break;
    case FrictionMode::Distance: {
      const double g = std::max(gamma, 0.0);
      const double base = 1.0 + cfg.friction.beta_f * g;
      eta_f = 1.0 - 1.0 / (base * base);
      break;
    }
  }
  return eta_f * (v_base_norm / vm) * v_mod;
}

StateVec modulated_velocity(const ModulatedSystem& sys, const StateVec& y, diffeo::FlowStats* stats) {
  StateVec v;
  switch (sys.cfg.method) {
    case Method::SDDC: v = sddc_velocity(sys, y, stats); break;
    case Method::SDC: v = sdc_velocity(sys, y, stats); break;
    case Method::Naive: v = naive_velocity(sys, y, stats); break;
    case Method::MM: v = mm_velocity(sys, y, stats); break;
    case Method::DT: v = dt_velocity(sys, y, stats); break;
    case Method::ARPF: v = arpf_velocity(sys, y, stats); break;
  }
  if (sys.cfg.friction.mode == FrictionMode::Disabled) return v;
  const double gamma = sys.flow.field->value(y);
  return friction(v, sys.base(y).norm(), gamma, sys.cfg);
}

}  // namespace sdt::modulate
