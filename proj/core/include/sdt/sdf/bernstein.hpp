#pragma once

#include "sdt/sdf/field.hpp"

namespace sdt::sdf {

/// Axis-aligned domain box used for normalizing polynomial fields.
struct Bounds {
  StateVec lo, hi;

  int dim() const { return static_cast<int>(lo.size()); }
  double diagonal() const { return (hi - lo).norm(); }
  void validate() const;
};

/// Bernstein basis values B_0..B_n of the given degree at u in [0,1].
Eigen::VectorXd bernstein_basis(int degree, double u);

/// First derivatives dB_i/du at u.
Eigen::VectorXd bernstein_basis_derivative(int degree, double u);

/// Tensor-product Bernstein polynomial over 2D bounds:
///   Gamma(x) = sum_ij c(i,j) B_i(u) B_j(v), (u, v) = normalized x.
class BernsteinSdf final : public SdfField {
 public:
  BernsteinSdf(int degree, Bounds bounds, Mat coefficients);

  int dim() const override { return 2; }
  double value(const StateVec& x) const override;
  StateVec gradient(const StateVec& x) const override;
  std::string kind() const override { return "bp"; }

  int degree() const { return degree_; }
  const Bounds& bounds() const { return bounds_; }
  const Mat& coefficients() const { return coeffs_; }
  Mat& coefficients() { return coeffs_; }

  /// Basis vector pair (B(u), B(v)) at x, plus du/dx scales for gradients.
  void basis_at(const StateVec& x, Eigen::VectorXd& bu, Eigen::VectorXd& bv,
                Eigen::VectorXd& dbu, Eigen::VectorXd& dbv, double& su, double& sv) const;

 private:
  int degree_;
  Bounds bounds_;
  Mat coeffs_;  // (degree+1) x (degree+1)
};

}  // namespace sdt::sdf
