#include "sdt/sdf/articulated.hpp"

#include "sdt/sdf/primitives.hpp"

#include <cmath>

namespace sdt::sdf {

void ArticulatedBody::validate() const {
  if (links() < 1) throw std::invalid_argument("articulated body: needs at least one link");
  if (radii.size() != link_lengths.size()) throw std::invalid_argument("articulated body: radii/lengths mismatch");
  if (!(link_lengths.minCoeff() > 0.0) || !(radii.minCoeff() > 0.0))
    throw std::invalid_argument("articulated body: lengths and radii must be > 0");
}

std::vector<Eigen::Vector2d> fk_joint_positions(const ArticulatedBody& body, const StateVec& q) {
  if (q.size() != body.links()) throw std::invalid_argument("articulated fk: q length must equal link count");
  std::vector<Eigen::Vector2d> p(body.links() + 1);
  p[0] = body.base_pos;
  double theta = body.base_angle;
  for (int i = 0; i < body.links(); ++i) {
    theta += q[i];
    p[i + 1] = p[i] + body.link_lengths[i] * Eigen::Vector2d(std::cos(theta), std::sin(theta));
  }
  return p;
}

double articulated_eval(const ArticulatedBody& body, const StateVec& q, const Eigen::Vector2d& x) {
  const auto p = fk_joint_positions(body, q);
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < body.links(); ++i)
    best = std::min(best, point_segment_distance(x, p[i], p[i + 1]) - body.radii[i]);
  return best;
}

StateVec articulated_grad_q(const ArticulatedBody& body, const StateVec& q, const Eigen::Vector2d& x) {
  const auto p = fk_joint_positions(body, q);

  // winning link (lowest index on ties) and its closest-point parameter
  int win = 0;
  double best = std::numeric_limits<double>::infinity(), t_win = 0.0;
  for (int i = 0; i < body.links(); ++i) {
    double t = 0.0;
    const double d = point_segment_distance(x, p[i], p[i + 1], &t) - body.radii[i];
    if (d < best) {
      best = d;
      win = i;
      t_win = t;
    }
  }

  // d(dist)/d(endpoints): with n the closest point at parameter t on [a, b],
  // d(dist)/da = -(1-t) u, d(dist)/db = -t u where u = (x - n)/|x - n|.
  const Eigen::Vector2d a = p[win], b = p[win + 1];
  const Eigen::Vector2d n = a + t_win * (b - a);
  const double dist = (x - n).norm();
  Eigen::Vector2d u = dist > 1e-12 ? Eigen::Vector2d((x - n) / dist) : Eigen::Vector2d(1.0, 0.0);
  const Eigen::Vector2d da = -(1.0 - t_win) * u;
  const Eigen::Vector2d db = -t_win * u;

  // dp_m/dq_j = sum_{i=j..m-1} L_i * rot90(dir_i) for j <= m-1
  StateVec grad = StateVec::Zero(q.size());
  double theta = body.base_angle;
  std::vector<Eigen::Vector2d> link_perp(body.links());
  for (int i = 0; i < body.links(); ++i) {
    theta += q[i];
    link_perp[i] = body.link_lengths[i] * Eigen::Vector2d(-std::sin(theta), std::cos(theta));
  }
  for (int j = 0; j < body.links(); ++j) {
    Eigen::Vector2d dpa = Eigen::Vector2d::Zero();  // d(p_win)/dq_j
    for (int i = j; i <= win - 1; ++i) dpa += link_perp[i];
    Eigen::Vector2d dpb = Eigen::Vector2d::Zero();  // d(p_{win+1})/dq_j
    for (int i = j; i <= win; ++i) dpb += link_perp[i];
    grad[j] = da.dot(dpa) + db.dot(dpb);
  }
  return grad;
}

JointSpaceBodySdf::JointSpaceBodySdf(ArticulatedBody body, Eigen::Vector2d x_query)
    : body_(std::move(body)), x_(std::move(x_query)) {
  body_.validate();
}

}  // namespace sdt::sdf
