#pragma once

#include "sdt/sdf/field.hpp"

#include <Eigen/Geometry>

namespace sdt::sdf {

class CircleSdf final : public SdfField {
 public:
  CircleSdf(Eigen::Vector2d center, double radius);
  int dim() const override { return 2; }
  double value(const StateVec& x) const override;
  StateVec gradient(const StateVec& x) const override;
  std::string kind() const override { return "gp"; }

  Eigen::Vector2d center;
  double radius;
};

/// Axis-aligned box.
class BoxSdf final : public SdfField {
 public:
  BoxSdf(Eigen::Vector2d center, Eigen::Vector2d half_extents);
  int dim() const override { return 2; }
  double value(const StateVec& x) const override;
  StateVec gradient(const StateVec& x) const override;
  std::string kind() const override { return "gp"; }

  Eigen::Vector2d center;
  Eigen::Vector2d half_extents;
};

class TriangleSdf final : public SdfField {
 public:
  TriangleSdf(Eigen::Vector2d a, Eigen::Vector2d b, Eigen::Vector2d c);
  int dim() const override { return 2; }
  double value(const StateVec& x) const override;
  std::string kind() const override { return "gp"; }

  Eigen::Vector2d a, b, c;
};

/// Circular band segment with round caps: all points within `thickness` of the
/// arc of `radius` spanning [angle0, angle1] around `center`.
class ArcSdf final : public SdfField {
 public:
  ArcSdf(Eigen::Vector2d center, double radius, double angle0, double angle1, double thickness);
  int dim() const override { return 2; }
  double value(const StateVec& x) const override;
  std::string kind() const override { return "gp"; }

  Eigen::Vector2d center;
  double radius, angle0, angle1, thickness;
};

class CapsuleSdf final : public SdfField {
 public:
  CapsuleSdf(Eigen::Vector2d a, Eigen::Vector2d b, double radius);
  int dim() const override { return 2; }
  double value(const StateVec& x) const override;
  StateVec gradient(const StateVec& x) const override;
  std::string kind() const override { return "gp"; }

  Eigen::Vector2d a, b;
  double radius;
};

/// Gamma(x) = n . x - offset with |n| = 1; useful for tests and as an exactly
/// representable target for polynomial fields.
class HalfPlaneSdf final : public SdfField {
 public:
  HalfPlaneSdf(StateVec normal, double offset);
  int dim() const override { return static_cast<int>(normal.size()); }
  double value(const StateVec& x) const override;
  StateVec gradient(const StateVec& x) const override;
  std::string kind() const override { return "gp"; }

  StateVec normal;
  double offset;
};

/// Distance from point p to segment [a, b], plus the interpolation parameter.
double point_segment_distance(const Eigen::Vector2d& p, const Eigen::Vector2d& a,
                              const Eigen::Vector2d& b, double* t_out = nullptr);

}  // namespace sdt::sdf
