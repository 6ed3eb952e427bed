#include "sdt/numdiff.hpp"

#include <Eigen/Eigenvalues>

namespace sdt {

double default_fd_step(const StateVec& x) {
  const double scale = x.size() == 0 ? 1.0 : std::max(1.0, x.cwiseAbs().maxCoeff());
  return 1e-5 * scale;
}

Mat finite_diff_jacobian(const VectorField& f, const StateVec& x, double h) {
  if (h <= 0.0) h = default_fd_step(x);
  const auto n = x.size();
  Mat jac;
  for (Eigen::Index j = 0; j < n; ++j) {
    StateVec xp = x, xm = x;
    xp[j] += h;
    xm[j] -= h;
    const StateVec fp = f(xp);
    const StateVec fm = f(xm);
    if (!fp.allFinite() || !fm.allFinite()) throw std::runtime_error("finite_diff_jacobian: non-finite evaluation");
    if (j == 0) jac.resize(fp.size(), n);
    jac.col(j) = (fp - fm) / (2.0 * h);
  }
  return jac;
}

double sym_max_eig(const Mat& J) {
  if (J.rows() != J.cols()) throw std::invalid_argument("sym_max_eig: matrix must be square");
  const Mat sym = 0.5 * (J + J.transpose());
  Eigen::SelfAdjointEigenSolver<Mat> es(sym, Eigen::EigenvaluesOnly);
  return es.eigenvalues().maxCoeff();
}

}  // namespace sdt
