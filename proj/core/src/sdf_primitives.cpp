#include "sdt/sdf/primitives.hpp"

#include <cmath>

namespace sdt::sdf {

namespace {

constexpr double kTau = 6.28318530717958647692;

Eigen::Vector2d as2(const StateVec& x) {
  if (x.size() != 2) throw std::invalid_argument("sdf primitive: expected 2D query");
  return {x[0], x[1]};
}

double wrap_angle(double a) {
  double w = std::fmod(a, kTau);
  if (w < 0.0) w += kTau;
  return w;
}

}  // namespace

double point_segment_distance(const Eigen::Vector2d& p, const Eigen::Vector2d& a,
                              const Eigen::Vector2d& b, double* t_out) {
  const Eigen::Vector2d ab = b - a;
  const double len2 = ab.squaredNorm();
  double t = len2 > 0.0 ? (p - a).dot(ab) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  if (t_out) *t_out = t;
  return (p - (a + t * ab)).norm();
}

// ---- circle ----

CircleSdf::CircleSdf(Eigen::Vector2d c, double r) : center(std::move(c)), radius(r) {
  if (!(radius > 0.0)) throw std::invalid_argument("circle sdf: radius must be > 0");
}

double CircleSdf::value(const StateVec& x) const { return (as2(x) - center).norm() - radius; }

StateVec CircleSdf::gradient(const StateVec& x) const {
  const Eigen::Vector2d u = as2(x) - center;
  const double n = u.norm();
  if (n < 1e-12) return (StateVec(2) << 1.0, 0.0).finished();  // medial axis tie-break
  StateVec g(2);
  g << u.x() / n, u.y() / n;
  return g;
}

// ---- box ----

BoxSdf::BoxSdf(Eigen::Vector2d c, Eigen::Vector2d h) : center(std::move(c)), half_extents(std::move(h)) {
  if (!(half_extents.minCoeff() > 0.0)) throw std::invalid_argument("box sdf: half extents must be > 0");
}

double BoxSdf::value(const StateVec& x) const {
  const Eigen::Vector2d q = (as2(x) - center).cwiseAbs() - half_extents;
  return q.cwiseMax(0.0).norm() + std::min(q.maxCoeff(), 0.0);
}

StateVec BoxSdf::gradient(const StateVec& x) const {
  const Eigen::Vector2d d = as2(x) - center;
  const Eigen::Vector2d q = d.cwiseAbs() - half_extents;
  Eigen::Vector2d g;
  if (q.maxCoeff() > 0.0) {
    const Eigen::Vector2d outside = q.cwiseMax(0.0);
    g = outside / outside.norm();
  } else {
    // interior: move along the closest face axis; x wins exact diagonal ties
    g = q.x() >= q.y() ? Eigen::Vector2d(1.0, 0.0) : Eigen::Vector2d(0.0, 1.0);
  }
  g.x() *= d.x() < 0.0 ? -1.0 : 1.0;
  g.y() *= d.y() < 0.0 ? -1.0 : 1.0;
  StateVec out(2);
  out << g.x(), g.y();
  return out;
}

// ---- triangle ----

TriangleSdf::TriangleSdf(Eigen::Vector2d pa, Eigen::Vector2d pb, Eigen::Vector2d pc)
    : a(std::move(pa)), b(std::move(pb)), c(std::move(pc)) {
  const double area2 = (b - a).x() * (c - a).y() - (b - a).y() * (c - a).x();
  if (std::abs(area2) < 1e-12) throw std::invalid_argument("triangle sdf: degenerate vertices");
  if (area2 < 0.0) std::swap(b, c);  // normalize to counter-clockwise
}

double TriangleSdf::value(const StateVec& x) const {
  const Eigen::Vector2d p = as2(x);
  const double d = std::min({point_segment_distance(p, a, b), point_segment_distance(p, b, c),
                             point_segment_distance(p, c, a)});
  auto side = [&p](const Eigen::Vector2d& u, const Eigen::Vector2d& v) {
    return (v - u).x() * (p - u).y() - (v - u).y() * (p - u).x();
  };
  const bool inside = side(a, b) >= 0.0 && side(b, c) >= 0.0 && side(c, a) >= 0.0;
  return inside ? -d : d;
}

// ---- arc band ----

ArcSdf::ArcSdf(Eigen::Vector2d c, double r, double a0, double a1, double th)
    : center(std::move(c)), radius(r), angle0(a0), angle1(a1), thickness(th) {
  if (!(radius > 0.0) || !(thickness > 0.0)) throw std::invalid_argument("arc sdf: radius/thickness must be > 0");
  if (!(angle1 > angle0) || angle1 - angle0 > kTau) throw std::invalid_argument("arc sdf: bad angular span");
}

double ArcSdf::value(const StateVec& x) const {
  const Eigen::Vector2d u = as2(x) - center;
  const double phi = std::atan2(u.y(), u.x());
  const double span = angle1 - angle0;
  double d_curve;
  if (wrap_angle(phi - angle0) <= span) {
    d_curve = std::abs(u.norm() - radius);
  } else {
    const Eigen::Vector2d e0 = radius * Eigen::Vector2d(std::cos(angle0), std::sin(angle0));
    const Eigen::Vector2d e1 = radius * Eigen::Vector2d(std::cos(angle1), std::sin(angle1));
    d_curve = std::min((u - e0).norm(), (u - e1).norm());
  }
  return d_curve - thickness;
}

// ---- capsule ----

CapsuleSdf::CapsuleSdf(Eigen::Vector2d pa, Eigen::Vector2d pb, double r)
    : a(std::move(pa)), b(std::move(pb)), radius(r) {
  if (!(radius > 0.0)) throw std::invalid_argument("capsule sdf: radius must be > 0");
}

double CapsuleSdf::value(const StateVec& x) const { return point_segment_distance(as2(x), a, b) - radius; }

StateVec CapsuleSdf::gradient(const StateVec& x) const {
  const Eigen::Vector2d p = as2(x);
  double t = 0.0;
  const double d = point_segment_distance(p, a, b, &t);
  StateVec g(2);
  if (d < 1e-12) {
    // on the spine: any normal direction is a valid tie-break
    Eigen::Vector2d dir = b - a;
    if (dir.squaredNorm() < 1e-24) dir = Eigen::Vector2d(1.0, 0.0);
    dir.normalize();
    g << -dir.y(), dir.x();
    return g;
  }
  const Eigen::Vector2d n = (p - (a + t * (b - a))) / d;
  g << n.x(), n.y();
  return g;
}

// ---- half plane ----

HalfPlaneSdf::HalfPlaneSdf(StateVec n, double off) : normal(std::move(n)), offset(off) {
  const double len = normal.norm();
  if (len < 1e-12) throw std::invalid_argument("half plane sdf: zero normal");
  normal /= len;
}

double HalfPlaneSdf::value(const StateVec& x) const { return normal.dot(x) - offset; }

StateVec HalfPlaneSdf::gradient(const StateVec&) const { return normal; }

}  // namespace sdt::sdf
