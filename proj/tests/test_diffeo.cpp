#include "sdt/diffeo.hpp"

#include "sdt/sdf/primitives.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace sdt;
using namespace sdt::diffeo;

namespace {

StateVec pt(double x, double y) {
  StateVec v(2);
  v << x, y;
  return v;
}

StateVec v1(double x) {
  StateVec v(1);
  v << x;
  return v;
}

// 1D half-plane Gamma(q) = q with b = 1/q: the flow of qdot = -1/q has the
// closed form psi(y) = sqrt(y^2 - 2t)
FlowMap half_plane_map(double horizon, int steps) {
  FlowMap map;
  map.field = std::make_shared<sdf::HalfPlaneSdf>(v1(1.0), 0.0);
  map.barrier.s_grad = 1.0;
  map.barrier.t_save = 0.0;
  map.barrier.b_cap = 1e12;  // effectively no saturation in the tested region
  map.horizon = horizon;
  map.solver = {SolverMethod::RungeKutta4, steps};
  return map;
}

FlowMap circle_map(double s_grad = 0.1, double t_save = 0.1, double horizon = 0.3) {
  FlowMap map;
  map.field = std::make_shared<sdf::CircleSdf>(Eigen::Vector2d(0.0, 0.0), 0.8);
  map.barrier.s_grad = s_grad;
  map.barrier.t_save = t_save;
  map.horizon = horizon;
  map.solver = {SolverMethod::RungeKutta4, 20};
  return map;
}

// the forward flow decreases Gamma at rate b, so it stays clear of the
// saturated shell iff (Gamma0 - t_save)^2 > 2 * s_grad * horizon
double safe_margin(const FlowMap& map) {
  return std::sqrt(2.0 * map.barrier.s_grad * map.horizon) + 0.05;
}

}  // namespace

TEST_CASE("flow_forward: zero barrier region is the identity") {
  FlowMap map = circle_map();
  map.barrier.s_grad = 1e-300;  // drives b to zero everywhere finite
  const StateVec y = pt(2.0, 1.0);
  CHECK((flow_forward(map, y) - y).norm() < 1e-12);
}

TEST_CASE("flow_forward: constant generator translates by t*g") {
  // half-plane with huge t_save saturation region gives constant b = b_cap;
  // gradient is the constant plane normal
  FlowMap map;
  map.field = std::make_shared<sdf::HalfPlaneSdf>(pt(0.0, 1.0), 0.0);
  map.barrier.s_grad = 1.0;
  map.barrier.t_save = 1e6;  // saturated everywhere we test
  map.barrier.b_cap = 0.5;
  map.horizon = 2.0;
  map.solver = {SolverMethod::Euler, 7};
  const StateVec y = pt(0.3, -0.4);
  // V = -b_cap * (0,1)
  CHECK(flow_forward(map, y).isApprox(pt(0.3, -0.4 - 2.0 * 0.5), 1e-12));
}

TEST_CASE("flow_forward: 1D half-plane closed form") {
  const double t = 1.0;
  FlowMap map = half_plane_map(t, 50);
  for (double y0 : {1.6, 2.0, 3.0, 5.0}) {
    const double expected = std::sqrt(y0 * y0 - 2.0 * t);
    CHECK(std::abs(flow_forward(map, v1(y0))[0] - expected) < 1e-4);
  }
}

TEST_CASE("flow_inverse: 1D half-plane closed form") {
  const double t = 1.0;
  FlowMap map = half_plane_map(t, 50);
  for (double q : {0.8, 1.5, 2.5}) {
    const double expected = std::sqrt(q * q + 2.0 * t);
    CHECK(std::abs(flow_inverse(map, v1(q))[0] - expected) < 1e-4);
  }
}

TEST_CASE("flow invertibility on random states away from the threshold") {
  FlowMap map = circle_map();
  map.solver.steps = 20;
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> uni(-3.0, 3.0);
  int checked = 0;
  while (checked < 100) {
    const StateVec y = pt(uni(rng), uni(rng));
    if (map.field->value(y) < map.barrier.t_save + safe_margin(map)) continue;
    const StateVec back = flow_inverse(map, flow_forward(map, y));
    CHECK((back - y).norm() < 1e-3);
    checked += 1;
  }
}

TEST_CASE("flow_jacobian: identity when the barrier vanishes") {
  FlowMap map = circle_map();
  map.barrier.s_grad = 1e-300;
  const Mat J = flow_jacobian(map, pt(1.5, 0.5));
  CHECK((J - Mat::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("flow_jacobian: 1D half-plane closed form") {
  const double t = 1.0;
  FlowMap map = half_plane_map(t, 50);
  for (double y0 : {1.8, 2.5, 4.0}) {
    const double expected = y0 / std::sqrt(y0 * y0 - 2.0 * t);
    SUBCASE("finite difference") {
      map.jac_method = JacMethod::FiniteDifference;
      CHECK(std::abs(flow_jacobian(map, v1(y0))(0, 0) - expected) < 1e-3);
    }
    SUBCASE("forward sensitivity") {
      map.jac_method = JacMethod::ForwardSensitivity;
      CHECK(std::abs(flow_jacobian(map, v1(y0))(0, 0) - expected) < 1e-3);
    }
  }
}

TEST_CASE("flow_jacobian: both methods agree on random states") {
  FlowMap fd = circle_map();
  FlowMap fs = circle_map();
  fd.jac_method = JacMethod::FiniteDifference;
  fs.jac_method = JacMethod::ForwardSensitivity;
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> uni(-3.0, 3.0);
  int checked = 0;
  while (checked < 50) {
    const StateVec y = pt(uni(rng), uni(rng));
    if (fd.field->value(y) < fd.barrier.t_save + safe_margin(fd)) continue;
    const Mat a = flow_jacobian(fd, y);
    const Mat b = flow_jacobian(fs, y);
    CHECK((a - b).cwiseAbs().maxCoeff() / std::max(1.0, b.cwiseAbs().maxCoeff()) < 1e-3);
    checked += 1;
  }
}

TEST_CASE("flow_jacobian: positive determinant (orientation preserved)") {
  FlowMap map = circle_map(0.2, 0.1);
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> uni(-3.0, 3.0);
  int checked = 0;
  while (checked < 50) {
    const StateVec y = pt(uni(rng), uni(rng));
    if (map.field->value(y) < map.barrier.t_save + safe_margin(map)) continue;
    CHECK(flow_jacobian(map, y).determinant() > 0.0);
    checked += 1;
  }
}

TEST_CASE("monotone horizon: displacement grows with t in a constant-sign region") {
  const StateVec y = pt(1.5, 0.0);
  double prev = 0.0;
  for (double t : {0.25, 0.5, 1.0, 1.5}) {
    FlowMap map = circle_map();
    map.horizon = t;
    const double disp = (flow_forward(map, y) - y).norm();
    CHECK(disp >= prev - 1e-12);
    prev = disp;
  }
}

TEST_CASE("flow stats: saturation hits are counted") {
  FlowMap map = circle_map();
  map.barrier.t_save = 0.5;
  FlowStats stats;
  (void)flow_forward(map, pt(0.9, 0.0), &stats);  // gamma = 0.1 < t_save: saturated
  CHECK(stats.saturation_hits > 0);
  CHECK(stats.field_evals > 0);
}

TEST_CASE("zero horizon flow is the identity") {
  FlowMap map = circle_map();
  map.horizon = 0.0;
  const StateVec y = pt(2.0, 2.0);
  CHECK(flow_forward(map, y) == y);
  CHECK(flow_inverse(map, y) == y);
}
