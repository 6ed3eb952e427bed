#include "sdt/sdf/bernstein.hpp"

#include <cmath>

namespace sdt::sdf {

void Bounds::validate() const {
  if (lo.size() != hi.size() || lo.size() == 0) throw std::invalid_argument("bounds: lo/hi shape mismatch");
  if (((hi - lo).array() <= 0.0).any()) throw std::invalid_argument("bounds: hi must exceed lo");
}

Eigen::VectorXd bernstein_basis(int degree, double u) {
  // de Casteljau-style recurrence, numerically stable for all u
  Eigen::VectorXd b = Eigen::VectorXd::Zero(degree + 1);
  b[0] = 1.0;
  for (int k = 1; k <= degree; ++k) {
    for (int i = k; i >= 1; --i) b[i] = u * b[i - 1] + (1.0 - u) * b[i];
    b[0] *= (1.0 - u);
  }
  return b;
}

Eigen::VectorXd bernstein_basis_derivative(int degree, double u) {
  Eigen::VectorXd d = Eigen::VectorXd::Zero(degree + 1);
  if (degree == 0) return d;
  const Eigen::VectorXd lower = bernstein_basis(degree - 1, u);
  for (int i = 0; i <= degree; ++i) {
    const double left = i >= 1 ? lower[i - 1] : 0.0;
    const double right = i <= degree - 1 ? lower[i] : 0.0;
    d[i] = degree * (left - right);
  }
  return d;
}

BernsteinSdf::BernsteinSdf(int degree, Bounds bounds, Mat coefficients)
    : degree_(degree), bounds_(std::move(bounds)), coeffs_(std::move(coefficients)) {
  if (degree_ < 0) throw std::invalid_argument("bernstein sdf: degree must be >= 0");
  bounds_.validate();
  if (bounds_.dim() != 2) throw std::invalid_argument("bernstein sdf: 2D bounds expected");
  if (coeffs_.rows() != degree_ + 1 || coeffs_.cols() != degree_ + 1)
    throw std::invalid_argument("bernstein sdf: coefficient shape mismatch");
}

void BernsteinSdf::basis_at(const StateVec& x, Eigen::VectorXd& bu, Eigen::VectorXd& bv,
                            Eigen::VectorXd& dbu, Eigen::VectorXd& dbv, double& su, double& sv) const {
  if (x.size() != 2) throw std::invalid_argument("bernstein sdf: expected 2D query");
  su = 1.0 / (bounds_.hi[0] - bounds_.lo[0]);
  sv = 1.0 / (bounds_.hi[1] - bounds_.lo[1]);
  const double u = (x[0] - bounds_.lo[0]) * su;
  const double v = (x[1] - bounds_.lo[1]) * sv;
  bu = bernstein_basis(degree_, u);
  bv = bernstein_basis(degree_, v);
  dbu = bernstein_basis_derivative(degree_, u);
  dbv = bernstein_basis_derivative(degree_, v);
}

double BernsteinSdf::value(const StateVec& x) const {
  Eigen::VectorXd bu, bv, dbu, dbv;
  double su, sv;
  basis_at(x, bu, bv, dbu, dbv, su, sv);
  return bu.dot(coeffs_ * bv);
}

StateVec BernsteinSdf::gradient(const StateVec& x) const {
  Eigen::VectorXd bu, bv, dbu, dbv;
  double su, sv;
  basis_at(x, bu, bv, dbu, dbv, su, sv);
  StateVec g(2);
  g[0] = su * dbu.dot(coeffs_ * bv);
  g[1] = sv * bu.dot(coeffs_ * dbv);
  return g;
}

}  // namespace sdt::sdf
