#include "sdt/barrier.hpp"

#include "sdt/sdf/primitives.hpp"

#include <doctest.h>

#include <random>

using namespace sdt;
using namespace sdt::barrier;

namespace {

StateVec pt(double x, double y) {
  StateVec v(2);
  v << x, y;
  return v;
}

}  // namespace

TEST_CASE("b_inv: direct substitutions") {
  BarrierConfig cfg;
  cfg.s_grad = 1.0;
  cfg.t_save = 0.0;
  CHECK(b_inv(2.0, cfg) == doctest::Approx(0.5));

  cfg.s_grad = 0.1;
  cfg.t_save = 0.1;
  CHECK(b_inv(0.6, cfg) == doctest::Approx(0.2));
}

TEST_CASE("b_inv: saturates at the cap near and below the threshold") {
  BarrierConfig cfg;
  cfg.s_grad = 1.0;
  cfg.t_save = 0.2;
  cfg.b_cap = 1e3;
  bool saturated = false;
  CHECK(b_inv(0.2 + 1e-9, cfg, &saturated) == doctest::Approx(1e3));
  CHECK(saturated);
  CHECK(b_inv(0.1, cfg) == doctest::Approx(1e3));  // below threshold
  CHECK(b_inv(-1.0, cfg) == doctest::Approx(1e3));
}

TEST_CASE("b_inv: non-increasing in gamma and vanishing at infinity") {
  BarrierConfig cfg;
  cfg.s_grad = 0.3;
  cfg.t_save = 0.1;
  double prev = b_inv(0.11, cfg);
  for (double gamma = 0.12; gamma < 20.0; gamma += 0.1) {
    const double cur = b_inv(gamma, cfg);
    CHECK(cur <= prev + 1e-15);
    prev = cur;
  }
  CHECK(b_inv(1e6, cfg) < 1e-6);
}

TEST_CASE("b_swept: aligned, opposed, orthogonal") {
  const StateVec g = pt(1.0, 0.0);
  CHECK(b_swept(pt(2.0, 0.0), g, SweptMode::Robot) == doctest::Approx(1.0));
  CHECK(b_swept(pt(-2.0, 0.0), g, SweptMode::Robot) == doctest::Approx(0.0));
  CHECK(b_swept(pt(0.0, 3.0), g, SweptMode::Scene) == doctest::Approx(0.5));
}

TEST_CASE("b_swept: zero vectors fall back to the full barrier") {
  CHECK(b_swept(pt(0.0, 0.0), pt(1.0, 0.0), SweptMode::Robot) == doctest::Approx(1.0));
  CHECK(b_swept(pt(1.0, 0.0), pt(0.0, 0.0), SweptMode::Scene) == doctest::Approx(1.0));
}

TEST_CASE("b_swept: in [0,1]; robot and scene modes sum to one") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> uni(-2.0, 2.0);
  for (int i = 0; i < 200; ++i) {
    const StateVec v = pt(uni(rng), uni(rng));
    const StateVec g = pt(uni(rng), uni(rng));
    const double robot = b_swept(v, g, SweptMode::Robot);
    const double scene = b_swept(v, g, SweptMode::Scene);
    CHECK(robot >= 0.0);
    CHECK(robot <= 1.0);
    CHECK(scene >= 0.0);
    CHECK(scene <= 1.0);
    if (v.norm() > 1e-12 && g.norm() > 1e-12) CHECK(robot + scene == doctest::Approx(1.0));
  }
}

TEST_CASE("generator: forced unit barrier flips the gradient") {
  // half-plane has grad (1, 0) everywhere; choose gamma so b_inv is exactly 1
  const sdf::HalfPlaneSdf plane(pt(1.0, 0.0), 0.0);
  BarrierConfig cfg;
  cfg.s_grad = 2.0;  // gamma = 2 -> b = 2/2 = 1
  cfg.t_save = 0.0;
  const StateVec v = generator(plane, cfg, pt(2.0, 0.0), StateVec());
  CHECK(v.isApprox(pt(-1.0, 0.0)));
}

TEST_CASE("generator: vanishes in the far field") {
  const sdf::CircleSdf circle({0.0, 0.0}, 1.0);
  BarrierConfig cfg;
  cfg.s_grad = 0.1;
  cfg.t_save = 0.1;
  const StateVec v = generator(circle, cfg, pt(500.0, 0.0), StateVec());
  CHECK(v.norm() < 1e-3);
}

TEST_CASE("generator: scene swept zeroes motion directly away from the obstacle") {
  const sdf::CircleSdf circle({0.0, 0.0}, 1.0);
  BarrierConfig cfg;
  cfg.swept = SweptMode::Scene;
  cfg.combine = true;
  const StateVec v_away = pt(1.0, 0.0);  // moving outward at (2, 0), parallel to grad
  const StateVec v = generator(circle, cfg, pt(2.0, 0.0), v_away);
  CHECK(v.norm() == doctest::Approx(0.0));
}

TEST_CASE("generator: antiparallel to the gradient whenever the barrier is positive") {
  const sdf::CircleSdf circle({0.3, -0.4}, 0.8);
  BarrierConfig cfg;
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> uni(-3.0, 3.0);
  int checked = 0;
  while (checked < 50) {
    const StateVec q = pt(uni(rng), uni(rng));
    if (circle.value(q) < cfg.t_save + 0.05) continue;
    const StateVec v = generator(circle, cfg, q, StateVec());
    const StateVec g = circle.gradient(q);
    if (v.norm() < 1e-12) continue;
    CHECK(v.dot(g) / (v.norm() * g.norm()) == doctest::Approx(-1.0));
    checked += 1;
  }
}

TEST_CASE("barrier config validation") {
  BarrierConfig bad;
  bad.s_grad = 0.0;
  CHECK_THROWS(bad.validate());
  bad = {};
  bad.b_cap = -1.0;
  CHECK_THROWS(bad.validate());
}
