#pragma once

#include "sdt/types.hpp"

#include <memory>
#include <string>
#include <vector>

namespace sdt::sdf {

/// Implicit signed distance function. Sign convention: negative inside,
/// zero on the surface, positive in free space.
class SdfField {
 public:
  virtual ~SdfField() = default;

  virtual int dim() const = 0;
  virtual double value(const StateVec& x) const = 0;

  /// Gradient of the distance. Default: central differences of value().
  virtual StateVec gradient(const StateVec& x) const;

  /// Short tag for reports ("gp", "mlp", "bp", "union", ...).
  virtual std::string kind() const = 0;
};

using FieldPtr = std::shared_ptr<const SdfField>;

/// Pointwise minimum of component fields. The gradient is taken from the
/// achieving component; exact ties go to the lowest index.
class UnionSdf final : public SdfField {
 public:
  explicit UnionSdf(std::vector<FieldPtr> parts);

  int dim() const override;
  double value(const StateVec& x) const override;
  StateVec gradient(const StateVec& x) const override;
  std::string kind() const override { return "union"; }

  /// Index of the component achieving the minimum (lowest index on ties).
  std::size_t achieving_index(const StateVec& x) const;
  const std::vector<FieldPtr>& parts() const { return parts_; }

 private:
  std::vector<FieldPtr> parts_;
};

}  // namespace sdt::sdf
