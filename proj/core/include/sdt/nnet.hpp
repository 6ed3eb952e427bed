#pragma once

#include "sdt/types.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace sdt::nnet {

enum class Activation { Tanh, Relu, Identity };

const char* to_string(Activation a);
Activation activation_from_string(const std::string& s);

struct Layer {
  Mat W;
  Eigen::VectorXd b;
  Activation act = Activation::Identity;
};

/// Feed-forward network. Inputs may optionally be expanded with sin/cos
/// positional-encoding features of `pe_frequencies` octaves before layer 0.
struct Mlp {
  std::vector<Layer> layers;
  int pe_frequencies = 0;

  int input_dim() const;    // raw input dimension (before encoding)
  int encoded_dim() const;  // dimension seen by layer 0
  int output_dim() const;
  void validate() const;  // adjacent shapes compatible, final activation identity
};

/// Glorot-uniform initialization; hidden layers use `act`, final layer identity.
Mlp make_mlp(int in_dim, const std::vector<int>& hidden, int out_dim, Activation act,
             std::uint64_t seed, int pe_frequencies = 0);

// ---- forward / reverse mode (batched: one column per sample) ----

struct ForwardTrace {
  Mat raw_input;       // D_in x B
  std::vector<Mat> a;  // activations, a[0] = encoded input, a[L] = output
  std::vector<Mat> z;  // pre-activations per layer
};

Mat forward(const Mlp& net, const Mat& X);
StateVec forward(const Mlp& net, const StateVec& x);
ForwardTrace forward_trace(const Mlp& net, const Mat& X);

struct Gradients {
  std::vector<Mat> dW;
  std::vector<Eigen::VectorXd> db;

  void setZero();
  void scale(double s);
  double squaredNorm() const;
  bool allFinite() const;
};

Gradients zero_gradients(const Mlp& net);

/// Reverse pass seeded with dL/d(output); accumulates parameter gradients.
/// When dL_dinput is non-null it receives dL/d(raw input).
void backward(const Mlp& net, const ForwardTrace& trace, const Mat& dL_dout, Gradients& grads,
              Mat* dL_dinput = nullptr);

/// Jacobian of the network output w.r.t. the raw input (forward accumulation).
Mat grad_input(const Mlp& net, const StateVec& x);

/// Scalar loss of the network output: value plus gradient w.r.t. the output.
struct LossEval {
  double value = 0.0;
  StateVec grad_out;
};
using LossFn = std::function<LossEval(const StateVec& out)>;

struct ParamGradResult {
  double loss = 0.0;
  Gradients grads;
};

/// Exact reverse-mode gradient of loss(forward(net, x)) w.r.t. every parameter.
ParamGradResult grad_params(const Mlp& net, const LossFn& loss, const StateVec& x);

// ---- forward-over-reverse (for losses on the input gradient) ----

/// Forward pass carrying a tangent direction per column: ta[L] holds the
/// Jacobian-vector product J_net(x) * tangent for each sample.
struct DualTrace {
  ForwardTrace primal;
  Mat tangent_in;       // raw tangent, D_in x B
  std::vector<Mat> ta;  // tangent activations, ta[0] = encoded tangent
  std::vector<Mat> tz;  // tangent pre-activations
};

DualTrace forward_dual(const Mlp& net, const Mat& X, const Mat& T);

/// Reverse pass through the dual computation: seeds on the primal output and
/// on the JVP output, accumulating exact parameter gradients of
///   sum_cols [ seed_value . out + seed_jvp . (J_net tangent) ].
void backward_dual(const Mlp& net, const DualTrace& dual, const Mat& seed_value,
                   const Mat& seed_jvp, Gradients& grads);

// ---- Adam ----

struct AdamState {
  std::vector<Mat> mW, vW;
  std::vector<Eigen::VectorXd> mb, vb;
  long step = 0;
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps_adam = 1e-8;
};

AdamState make_adam(const Mlp& net, double lr = 1e-3);

/// Standard bias-corrected Adam update; increments state.step. The caller owns
/// any learning-rate schedule via state.lr.
void adam_step(Mlp& net, const Gradients& grads, AdamState& state);

// ---- checkpoints ----

void save_checkpoint(const Mlp& net, const std::filesystem::path& path);
Mlp load_checkpoint(const std::filesystem::path& path);
std::string checkpoint_json(const Mlp& net);
Mlp mlp_from_checkpoint_json(const std::string& text);

}  // namespace sdt::nnet
