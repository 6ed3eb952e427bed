#pragma once

#include "sdt/sdf/field.hpp"

#include <Eigen/Geometry>

namespace sdt::sdf {

/// Planar revolute chain whose links are capsules posed by forward kinematics.
struct ArticulatedBody {
  Eigen::VectorXd link_lengths;  // one entry per link, > 0
  Eigen::VectorXd radii;         // capsule radius per link, > 0
  Eigen::Vector2d base_pos = Eigen::Vector2d::Zero();
  double base_angle = 0.0;

  int links() const { return static_cast<int>(link_lengths.size()); }
  void validate() const;
};

/// Joint positions p_0..p_K for joint angles q (q.size() == links).
std::vector<Eigen::Vector2d> fk_joint_positions(const ArticulatedBody& body, const StateVec& q);

/// Signed distance from workspace point x to the posed body (min over links).
double articulated_eval(const ArticulatedBody& body, const StateVec& q, const Eigen::Vector2d& x);

/// d(articulated_eval)/dq via the chain rule through forward kinematics.
StateVec articulated_grad_q(const ArticulatedBody& body, const StateVec& q, const Eigen::Vector2d& x);

/// The body distance as a field over joint space for a fixed query point; this
/// is what the barrier/flow machinery consumes in the articulated setting.
class JointSpaceBodySdf final : public SdfField {
 public:
  JointSpaceBodySdf(ArticulatedBody body, Eigen::Vector2d x_query);

  int dim() const override { return body_.links(); }
  double value(const StateVec& q) const override { return articulated_eval(body_, q, x_); }
  StateVec gradient(const StateVec& q) const override { return articulated_grad_q(body_, q, x_); }
  std::string kind() const override { return "articulated"; }

 private:
  ArticulatedBody body_;
  Eigen::Vector2d x_;
};

}  // namespace sdt::sdf
