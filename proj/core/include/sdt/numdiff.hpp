#pragma once

#include "sdt/types.hpp"

namespace sdt {

/// Default central-difference step: 1e-5 relative to max(1, |x|_inf).
double default_fd_step(const StateVec& x);

/// Central-difference Jacobian of f at x, entry (i,j) = (f_i(x+h e_j) - f_i(x-h e_j)) / (2h).
/// Pass h <= 0 to use the default step. Throws on non-finite evaluations.
Mat finite_diff_jacobian(const VectorField& f, const StateVec& x, double h = 0.0);

/// Largest eigenvalue of the symmetric part (J + J^T)/2. Throws if J is not square.
double sym_max_eig(const Mat& J);

}  // namespace sdt
