#include "sdt/nnet.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <random>

using namespace sdt;
using namespace sdt::nnet;

namespace {

StateVec vec(std::initializer_list<double> vals) {
  StateVec v(static_cast<Eigen::Index>(vals.size()));
  Eigen::Index i = 0;
  for (double x : vals) v[i++] = x;
  return v;
}

// central finite differences of an arbitrary scalar functional of the network
// w.r.t. every parameter
Gradients fd_param_gradients(Mlp net, const std::function<double(const Mlp&)>& scalar, double h = 1e-6) {
  Gradients g = zero_gradients(net);
  for (std::size_t l = 0; l < net.layers.size(); ++l) {
    for (Eigen::Index i = 0; i < net.layers[l].W.size(); ++i) {
      double& p = net.layers[l].W.data()[i];
      const double orig = p;
      p = orig + h;
      const double up = scalar(net);
      p = orig - h;
      const double dn = scalar(net);
      p = orig;
      g.dW[l].data()[i] = (up - dn) / (2.0 * h);
    }
    for (Eigen::Index i = 0; i < net.layers[l].b.size(); ++i) {
      double& p = net.layers[l].b[i];
      const double orig = p;
      p = orig + h;
      const double up = scalar(net);
      p = orig - h;
      const double dn = scalar(net);
      p = orig;
      g.db[l][i] = (up - dn) / (2.0 * h);
    }
  }
  return g;
}

double max_rel_err(const Gradients& a, const Gradients& b) {
  double worst = 0.0;
  for (std::size_t l = 0; l < a.dW.size(); ++l) {
    for (Eigen::Index i = 0; i < a.dW[l].size(); ++i) {
      const double denom = std::max(1.0, std::abs(b.dW[l].data()[i]));
      worst = std::max(worst, std::abs(a.dW[l].data()[i] - b.dW[l].data()[i]) / denom);
    }
    for (Eigen::Index i = 0; i < a.db[l].size(); ++i) {
      const double denom = std::max(1.0, std::abs(b.db[l][i]));
      worst = std::max(worst, std::abs(a.db[l][i] - b.db[l][i]) / denom);
    }
  }
  return worst;
}

}  // namespace

TEST_CASE("forward: identity layer passes input through") {
  Mlp net;
  net.layers.push_back({Mat::Identity(3, 3), Eigen::VectorXd::Zero(3), Activation::Identity});
  const StateVec x = vec({0.5, -1.0, 2.0});
  CHECK(forward(net, x).isApprox(x));
}

TEST_CASE("forward: zero weights output the bias") {
  Mlp net;
  Eigen::VectorXd b = vec({0.7, -0.2});
  net.layers.push_back({Mat::Zero(2, 3), b, Activation::Identity});
  CHECK(forward(net, vec({1.0, 2.0, 3.0})).isApprox(b));
}

TEST_CASE("forward: 2-2-1 tanh net matches the hand-expanded formula") {
  Mlp net;
  Mat W1(2, 2);
  W1 << 0.3, -0.5, 0.8, 0.1;
  Eigen::VectorXd b1 = vec({0.05, -0.1});
  Mat W2(1, 2);
  W2 << 1.2, -0.7;
  Eigen::VectorXd b2 = vec({0.2});
  net.layers.push_back({W1, b1, Activation::Tanh});
  net.layers.push_back({W2, b2, Activation::Identity});

  const double x1 = 0.4, x2 = -0.9;
  const double h1 = std::tanh(0.3 * x1 - 0.5 * x2 + 0.05);
  const double h2 = std::tanh(0.8 * x1 + 0.1 * x2 - 0.1);
  const double expected = 1.2 * h1 - 0.7 * h2 + 0.2;
  CHECK(forward(net, vec({x1, x2}))[0] == doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("forward is deterministic") {
  const Mlp net = make_mlp(2, {16, 16}, 3, Activation::Tanh, 42);
  const StateVec x = vec({0.1, -0.3});
  CHECK(forward(net, x) == forward(net, x));
}

TEST_CASE("grad_params: zero-weight net with squared loss to zero target") {
  Mlp net;
  Eigen::VectorXd b = vec({0.4, -0.6});
  net.layers.push_back({Mat::Zero(2, 2), b, Activation::Identity});
  const LossFn loss = [](const StateVec& out) {
    return LossEval{out.squaredNorm(), StateVec(2.0 * out)};
  };
  const auto res = grad_params(net, loss, vec({1.0, 1.0}));
  CHECK(res.grads.db[0].isApprox(2.0 * b));
  CHECK(res.loss == doctest::Approx(b.squaredNorm()));
}

TEST_CASE("grad_params: loss independent of output gives zero gradients") {
  const Mlp net = make_mlp(2, {8}, 2, Activation::Tanh, 1);
  const LossFn loss = [](const StateVec& out) { return LossEval{3.0, StateVec(StateVec::Zero(out.size()))}; };
  const auto res = grad_params(net, loss, vec({0.2, 0.8}));
  CHECK(res.grads.squaredNorm() == doctest::Approx(0.0));
}

TEST_CASE("grad_params matches finite differences on random nets") {
  std::mt19937_64 seeds(123);
  for (int trial = 0; trial < 50; ++trial) {
    const std::uint64_t seed = seeds();
    const Mlp net = make_mlp(2, {6, 5}, 2, Activation::Tanh, seed);
    std::mt19937_64 rng(seed + 1);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    const StateVec x = vec({uni(rng), uni(rng)});
    const StateVec target = vec({uni(rng), uni(rng)});

    const LossFn loss = [&target](const StateVec& out) {
      return LossEval{(out - target).squaredNorm(), StateVec(2.0 * (out - target))};
    };
    const auto res = grad_params(net, loss, x);
    const Gradients fd = fd_param_gradients(net, [&](const Mlp& n) {
      return (forward(n, x) - target).squaredNorm();
    });
    CHECK(max_rel_err(res.grads, fd) < 1e-4);
  }
}

TEST_CASE("grad_input: linear layer returns its weights") {
  Mlp net;
  Mat W(2, 3);
  W << 1.0, 2.0, 3.0, -1.0, 0.5, 0.0;
  net.layers.push_back({W, Eigen::VectorXd::Zero(2), Activation::Identity});
  CHECK(grad_input(net, vec({0.1, 0.2, 0.3})).isApprox(W));
}

TEST_CASE("grad_input: constant net gives a zero Jacobian") {
  Mlp net;
  net.layers.push_back({Mat::Zero(2, 2), vec({1.0, 2.0}), Activation::Identity});
  CHECK(grad_input(net, vec({5.0, -5.0})).cwiseAbs().maxCoeff() == doctest::Approx(0.0));
}

TEST_CASE("grad_input matches finite differences on random nets") {
  std::mt19937_64 seeds(99);
  std::uniform_real_distribution<double> uni(-1.5, 1.5);
  for (int trial = 0; trial < 50; ++trial) {
    const Mlp net = make_mlp(2, {10, 8}, 3, Activation::Tanh, seeds());
    const StateVec x = vec({uni(seeds), uni(seeds)});
    const Mat J = grad_input(net, x);
    const double h = 1e-6;
    for (int j = 0; j < 2; ++j) {
      StateVec xp = x, xm = x;
      xp[j] += h;
      xm[j] -= h;
      const StateVec col = (forward(net, xp) - forward(net, xm)) / (2.0 * h);
      for (int i = 0; i < 3; ++i) {
        const double denom = std::max(1.0, std::abs(col[i]));
        CHECK(std::abs(J(i, j) - col[i]) / denom < 1e-4);
      }
    }
  }
}

TEST_CASE("grad_input with positional encoding matches finite differences") {
  const Mlp net = make_mlp(2, {12}, 1, Activation::Tanh, 31, /*pe_frequencies=*/3);
  const StateVec x = vec({0.37, -0.21});
  const Mat J = grad_input(net, x);
  const double h = 1e-6;
  for (int j = 0; j < 2; ++j) {
    StateVec xp = x, xm = x;
    xp[j] += h;
    xm[j] -= h;
    const double fd = (forward(net, xp)[0] - forward(net, xm)[0]) / (2.0 * h);
    CHECK(J(0, j) == doctest::Approx(fd).epsilon(1e-5));
  }
}

TEST_CASE("backward_dual: parameter gradient of a JVP matches finite differences") {
  const Mlp net = make_mlp(2, {7, 6}, 1, Activation::Tanh, 5);
  const StateVec x = vec({0.3, -0.4});
  const Mat T = (Mat(2, 1) << 1.0, 0.0).finished();  // tangent along x_1

  Gradients grads = zero_gradients(net);
  const DualTrace dual = forward_dual(net, Mat(x), T);
  backward_dual(net, dual, Mat::Zero(1, 1), Mat::Ones(1, 1), grads);

  const Gradients fd = fd_param_gradients(net, [&](const Mlp& n) { return grad_input(n, x)(0, 0); });
  CHECK(max_rel_err(grads, fd) < 1e-4);
}

TEST_CASE("adam: zero gradient leaves parameters unchanged and bumps the step") {
  Mlp net = make_mlp(1, {4}, 1, Activation::Tanh, 3);
  const Mlp before = net;
  AdamState state = make_adam(net, 1e-2);
  adam_step(net, zero_gradients(net), state);
  CHECK(state.step == 1);
  for (std::size_t l = 0; l < net.layers.size(); ++l) {
    CHECK(net.layers[l].W.isApprox(before.layers[l].W));
    CHECK(net.layers[l].b.isApprox(before.layers[l].b));
  }
}

TEST_CASE("adam: first step matches the scalar hand computation") {
  // single scalar weight, gradient g: bias correction cancels and the first
  // update is -lr * g / (|g| + eps)
  Mlp net;
  net.layers.push_back({Mat::Constant(1, 1, 2.0), Eigen::VectorXd::Zero(1), Activation::Identity});
  AdamState state = make_adam(net, 0.1);
  Gradients g = zero_gradients(net);
  g.dW[0](0, 0) = 0.5;
  adam_step(net, g, state);
  const double expected = 2.0 - 0.1 * 0.5 / (0.5 + 1e-8);
  CHECK(net.layers[0].W(0, 0) == doctest::Approx(expected).epsilon(1e-9));
}

TEST_CASE("adam: strictly decreases a 1D quadratic over consecutive steps") {
  Mlp net;
  net.layers.push_back({Mat::Constant(1, 1, 1.0), Eigen::VectorXd::Zero(1), Activation::Identity});
  AdamState state = make_adam(net, 0.05);
  auto loss_of = [](double w) { return (w - 0.3) * (w - 0.3); };
  double prev = loss_of(net.layers[0].W(0, 0));
  for (int it = 0; it < 2; ++it) {
    Gradients g = zero_gradients(net);
    g.dW[0](0, 0) = 2.0 * (net.layers[0].W(0, 0) - 0.3);
    adam_step(net, g, state);
    const double cur = loss_of(net.layers[0].W(0, 0));
    CHECK(cur < prev);
    prev = cur;
  }
}

TEST_CASE("checkpoint json round trip") {
  const Mlp net = make_mlp(3, {5, 4}, 2, Activation::Relu, 17, /*pe_frequencies=*/2);
  const Mlp back = mlp_from_checkpoint_json(checkpoint_json(net));
  REQUIRE(back.layers.size() == net.layers.size());
  CHECK(back.pe_frequencies == net.pe_frequencies);
  for (std::size_t l = 0; l < net.layers.size(); ++l) {
    CHECK(back.layers[l].W == net.layers[l].W);
    CHECK(back.layers[l].b == net.layers[l].b);
    CHECK(back.layers[l].act == net.layers[l].act);
  }
  const StateVec x = vec({0.1, 0.2, 0.3});
  CHECK(forward(back, x) == forward(net, x));
}

TEST_CASE("mlp validation rejects incompatible shapes") {
  Mlp net;
  net.layers.push_back({Mat::Zero(3, 2), Eigen::VectorXd::Zero(3), Activation::Tanh});
  net.layers.push_back({Mat::Zero(2, 4), Eigen::VectorXd::Zero(2), Activation::Identity});
  CHECK_THROWS(net.validate());
  CHECK_THROWS(forward(make_mlp(2, {4}, 1, Activation::Tanh, 0), vec({1.0, 2.0, 3.0})));
}
