#pragma once

#include "sdt/sdf/field.hpp"
#include "sdt/types.hpp"

namespace sdt::metrics {

struct CurvatureSeries {
  std::vector<double> times;
  std::vector<double> kappa;
  int skipped = 0;  // near-zero-speed samples excluded from the series
};

/// kappa(t) = |tau'' x tau'| / |tau'|^3 with central-difference derivatives;
/// in any dimension the cross-product magnitude is computed via the Gram
/// identity |a x b|^2 = |a|^2 |b|^2 - (a.b)^2.
CurvatureSeries curvature(const Trajectory& traj);

double max_curvature(const Trajectory& traj);

/// | max kappa(base) - max kappa(mod) |
double rfc(const Trajectory& base, const Trajectory& mod);

/// Mean arccos of the clamped cosine between f_c and f_m along mod's samples.
/// Zero-velocity samples are skipped; throws if every sample degenerates.
double vm(const VectorField& f_c, const VectorField& f_m, const Trajectory& mod,
          int* skipped = nullptr);

/// Symmetric nearest-neighbor sum
///   sum_j min_i d(a_i, b_j) + sum_i min_j d(a_i, b_j).
double dtwd(const Trajectory& a, const Trajectory& b);

/// | max |jerk(base)| - max |jerk(mod)| | with third derivatives by repeated
/// central differencing (needs at least 5 samples).
double mj(const Trajectory& base, const Trajectory& mod);

/// min over samples of the signed distance.
double d_min(const Trajectory& mod, const sdf::SdfField& field);

struct MetricReport {
  double rfc = 0.0;
  double vm = 0.0;     // radians in [0, pi]
  double dtwd = 0.0;
  double mj = 0.0;
  double d_min = 0.0;
};

}  // namespace sdt::metrics
