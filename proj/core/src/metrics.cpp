#include "sdt/metrics.hpp"

#include <cmath>

namespace sdt::metrics {

namespace {

// non-uniform central first derivative at interior nodes; output times are the
// interior timestamps
void central_derivative(const std::vector<double>& t, const std::vector<StateVec>& x,
                        std::vector<double>& to, std::vector<StateVec>& xo) {
  to.clear();
  xo.clear();
  for (std::size_t i = 1; i + 1 < x.size(); ++i) {
    to.push_back(t[i]);
    xo.push_back((x[i + 1] - x[i - 1]) / (t[i + 1] - t[i - 1]));
  }
}

// non-uniform 3-point second derivative at interior nodes
void central_second_derivative(const std::vector<double>& t, const std::vector<StateVec>& x,
                               std::vector<double>& to, std::vector<StateVec>& xo) {
  to.clear();
  xo.clear();
  for (std::size_t i = 1; i + 1 < x.size(); ++i) {
    const double h1 = t[i] - t[i - 1];
    const double h2 = t[i + 1] - t[i];
    to.push_back(t[i]);
    xo.push_back(2.0 * ((x[i + 1] - x[i]) / h2 - (x[i] - x[i - 1]) / h1) / (h1 + h2));
  }
}

double cross_magnitude(const StateVec& a, const StateVec& b) {
  const double d = a.dot(b);
  const double g = a.squaredNorm() * b.squaredNorm() - d * d;
  return std::sqrt(std::max(g, 0.0));
}

}  // namespace

CurvatureSeries curvature(const Trajectory& traj) {
  traj.validate();
  if (traj.size() < 4) throw std::invalid_argument("curvature: need at least 4 samples");

  std::vector<double> tv, ta;
  std::vector<StateVec> vel, acc;
  central_derivative(traj.times, traj.states, tv, vel);
  central_second_derivative(traj.times, traj.states, ta, acc);

  double max_speed = 0.0;
  for (const auto& v : vel) max_speed = std::max(max_speed, v.norm());
  const double speed_floor = 1e-9 * std::max(1.0, max_speed);

  CurvatureSeries out;
  for (std::size_t i = 0; i < vel.size(); ++i) {
    const double speed = vel[i].norm();
    if (speed < speed_floor) {
      out.skipped += 1;
      continue;
    }
    out.times.push_back(tv[i]);
    out.kappa.push_back(cross_magnitude(acc[i], vel[i]) / (speed * speed * speed));
  }
  return out;
}

double max_curvature(const Trajectory& traj) {
  const CurvatureSeries series = curvature(traj);
  if (series.kappa.empty()) throw std::runtime_error("curvature: every sample degenerate");
  double m = 0.0;
  for (double k : series.kappa) m = std::max(m, k);
  return m;
}

double rfc(const Trajectory& base, const Trajectory& mod) {
  return std::abs(max_curvature(base) - max_curvature(mod));
}

double vm(const VectorField& f_c, const VectorField& f_m, const Trajectory& mod, int* skipped) {
  mod.validate();
  if (mod.empty()) throw std::invalid_argument("vm: empty trajectory");
  double acc = 0.0;
  int used = 0, skip = 0;
  for (const auto& x : mod.states) {
    const StateVec a = f_c(x);
    const StateVec b = f_m(x);
    const double an = a.norm(), bn = b.norm();
    if (an < 1e-12 || bn < 1e-12) {
      skip += 1;
      continue;
    }
    // angle via atan2(|a x b|, a.b): same value as arccos of the clamped
    // cosine, but exact for aligned, opposed, and orthogonal pairs
    acc += std::atan2(cross_magnitude(a, b), a.dot(b));
    used += 1;
  }
  if (skipped) *skipped = skip;
  if (used == 0) throw std::runtime_error("vm: every sample degenerate");
  return acc / used;
}

double dtwd(const Trajectory& a, const Trajectory& b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("dtwd: empty trajectory");
  if (a.dim() != b.dim()) throw std::invalid_argument("dtwd: dimension mismatch");
  // the one-sided sums are accumulated separately so the result is bitwise
  // symmetric in its arguments
  double to_b = 0.0;
  for (const auto& pb : b.states) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& pa : a.states) best = std::min(best, (pa - pb).norm());
    to_b += best;
  }
  double to_a = 0.0;
  for (const auto& pa : a.states) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& pb : b.states) best = std::min(best, (pa - pb).norm());
    to_a += best;
  }
  return to_b + to_a;
}

namespace {

double max_jerk(const Trajectory& traj) {
  traj.validate();
  if (traj.size() < 5) throw std::invalid_argument("mj: need at least 5 samples");
  std::vector<double> ta, tj;
  std::vector<StateVec> acc, jerk;
  central_second_derivative(traj.times, traj.states, ta, acc);
  central_derivative(ta, acc, tj, jerk);
  double m = 0.0;
  for (const auto& j : jerk) m = std::max(m, j.norm());
  return m;
}

}  // namespace

double mj(const Trajectory& base, const Trajectory& mod) {
  return std::abs(max_jerk(base) - max_jerk(mod));
}

double d_min(const Trajectory& mod, const sdf::SdfField& field) {
  if (mod.empty()) throw std::invalid_argument("d_min: empty trajectory");
  double best = std::numeric_limits<double>::infinity();
  for (const auto& x : mod.states) best = std::min(best, field.value(x));
  return best;
}

}  // namespace sdt::metrics
