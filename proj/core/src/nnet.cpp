#include "sdt/nnet.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <fstream>
#include <random>

namespace sdt::nnet {

namespace {

constexpr double kPi = 3.14159265358979323846;

Mat activate(const Mat& z, Activation a) {
  switch (a) {
    case Activation::Tanh: return z.array().tanh();
    case Activation::Relu: return z.cwiseMax(0.0);
    case Activation::Identity: return z;
  }
  throw std::logic_error("bad activation");
}

// sigma'(z)
Mat activate_d(const Mat& z, Activation a) {
  switch (a) {
    case Activation::Tanh: return 1.0 - z.array().tanh().square();
    case Activation::Relu: return (z.array() > 0.0).cast<double>();
    case Activation::Identity: return Mat::Ones(z.rows(), z.cols());
  }
  throw std::logic_error("bad activation");
}

// sigma''(z); zero a.e. for relu and identity
Mat activate_dd(const Mat& z, Activation a) {
  switch (a) {
    case Activation::Tanh: {
      const Mat t = z.array().tanh();
      return -2.0 * t.array() * (1.0 - t.array().square());
    }
    case Activation::Relu:
    case Activation::Identity: return Mat::Zero(z.rows(), z.cols());
  }
  throw std::logic_error("bad activation");
}

// positional encoding: [x; sin(2^j pi x); cos(2^j pi x)] per component
Mat encode(const Mat& X, int freqs) {
  if (freqs <= 0) return X;
  const auto d = X.rows();
  Mat E(d * (1 + 2 * freqs), X.cols());
  E.topRows(d) = X;
  for (int j = 0; j < freqs; ++j) {
    const double w = std::pow(2.0, j) * kPi;
    E.middleRows(d * (1 + 2 * j), d) = (w * X.array()).sin();
    E.middleRows(d * (2 + 2 * j), d) = (w * X.array()).cos();
  }
  return E;
}

// tangent of the encoding: J_enc(X) * T (the encoding acts componentwise)
Mat encode_tangent(const Mat& X, const Mat& T, int freqs) {
  if (freqs <= 0) return T;
  const auto d = X.rows();
  Mat E(d * (1 + 2 * freqs), X.cols());
  E.topRows(d) = T;
  for (int j = 0; j < freqs; ++j) {
    const double w = std::pow(2.0, j) * kPi;
    E.middleRows(d * (1 + 2 * j), d) = w * (w * X.array()).cos() * T.array();
    E.middleRows(d * (2 + 2 * j), d) = -w * (w * X.array()).sin() * T.array();
  }
  return E;
}

// Jacobian of the encoding for a single sample: enc_dim x d stacked diagonals
Mat encode_jacobian(const Eigen::VectorXd& x, int freqs) {
  const auto d = x.size();
  if (freqs <= 0) return Mat::Identity(d, d);
  Mat J = Mat::Zero(d * (1 + 2 * freqs), d);
  J.topRows(d).setIdentity();
  for (int j = 0; j < freqs; ++j) {
    const double w = std::pow(2.0, j) * kPi;
    for (Eigen::Index i = 0; i < d; ++i) {
      J(d * (1 + 2 * j) + i, i) = w * std::cos(w * x[i]);
      J(d * (2 + 2 * j) + i, i) = -w * std::sin(w * x[i]);
    }
  }
  return J;
}

// dL/d(raw input) from dL/d(encoded input)
Mat encode_backward(const Mat& X, const Mat& dE, int freqs) {
  if (freqs <= 0) return dE;
  const auto d = X.rows();
  Mat dX = dE.topRows(d);
  for (int j = 0; j < freqs; ++j) {
    const double w = std::pow(2.0, j) * kPi;
    dX.array() += w * (w * X.array()).cos() * dE.middleRows(d * (1 + 2 * j), d).array();
    dX.array() += -w * (w * X.array()).sin() * dE.middleRows(d * (2 + 2 * j), d).array();
  }
  return dX;
}

}  // namespace

const char* to_string(Activation a) {
  switch (a) {
    case Activation::Tanh: return "tanh";
    case Activation::Relu: return "relu";
    case Activation::Identity: return "identity";
  }
  return "?";
}

Activation activation_from_string(const std::string& s) {
  if (s == "tanh") return Activation::Tanh;
  if (s == "relu") return Activation::Relu;
  if (s == "identity") return Activation::Identity;
  throw std::invalid_argument("unknown activation: " + s);
}

int Mlp::input_dim() const {
  if (layers.empty()) return 0;
  const int enc = static_cast<int>(layers.front().W.cols());
  return pe_frequencies > 0 ? enc / (1 + 2 * pe_frequencies) : enc;
}

int Mlp::encoded_dim() const { return layers.empty() ? 0 : static_cast<int>(layers.front().W.cols()); }

int Mlp::output_dim() const { return layers.empty() ? 0 : static_cast<int>(layers.back().W.rows()); }

void Mlp::validate() const {
  if (layers.empty()) throw std::invalid_argument("mlp: no layers");
  for (std::size_t l = 0; l < layers.size(); ++l) {
    if (layers[l].b.size() != layers[l].W.rows()) throw std::invalid_argument("mlp: bias/weight shape mismatch");
    if (l > 0 && layers[l].W.cols() != layers[l - 1].W.rows())
      throw std::invalid_argument("mlp: adjacent layer shapes incompatible");
  }
  if (layers.back().act != Activation::Identity)
    throw std::invalid_argument("mlp: final layer activation must be identity");
  if (pe_frequencies > 0 && encoded_dim() % (1 + 2 * pe_frequencies) != 0)
    throw std::invalid_argument("mlp: first layer width incompatible with positional encoding");
}

Mlp make_mlp(int in_dim, const std::vector<int>& hidden, int out_dim, Activation act,
             std::uint64_t seed, int pe_frequencies) {
  Mlp net;
  net.pe_frequencies = pe_frequencies;
  std::mt19937_64 rng(seed);
  const int enc = pe_frequencies > 0 ? in_dim * (1 + 2 * pe_frequencies) : in_dim;
  std::vector<int> dims;
  dims.push_back(enc);
  for (int h : hidden) dims.push_back(h);
  dims.push_back(out_dim);
  for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
    Layer layer;
    const int fan_in = dims[l], fan_out = dims[l + 1];
    const double bound = std::sqrt(6.0 / (fan_in + fan_out));
    std::uniform_real_distribution<double> dist(-bound, bound);
    layer.W.resize(fan_out, fan_in);
    for (Eigen::Index i = 0; i < layer.W.size(); ++i) layer.W.data()[i] = dist(rng);
    layer.b = Eigen::VectorXd::Zero(fan_out);
    layer.act = (l + 2 == dims.size()) ? Activation::Identity : act;
    net.layers.push_back(std::move(layer));
  }
  net.validate();
  return net;
}

ForwardTrace forward_trace(const Mlp& net, const Mat& X) {
  if (X.rows() != net.input_dim()) throw std::invalid_argument("mlp forward: input dimension mismatch");
  ForwardTrace tr;
  tr.raw_input = X;
  tr.a.reserve(net.layers.size() + 1);
  tr.z.reserve(net.layers.size());
  tr.a.push_back(encode(X, net.pe_frequencies));
  for (const auto& layer : net.layers) {
    Mat z = (layer.W * tr.a.back()).colwise() + layer.b;
    tr.a.push_back(activate(z, layer.act));
    tr.z.push_back(std::move(z));
  }
  return tr;
}

Mat forward(const Mlp& net, const Mat& X) {
  if (X.rows() != net.input_dim()) throw std::invalid_argument("mlp forward: input dimension mismatch");
  Mat a = encode(X, net.pe_frequencies);
  for (const auto& layer : net.layers) a = activate((layer.W * a).colwise() + layer.b, layer.act);
  return a;
}

StateVec forward(const Mlp& net, const StateVec& x) { return forward(net, Mat(x)).col(0); }

void Gradients::setZero() {
  for (auto& m : dW) m.setZero();
  for (auto& v : db) v.setZero();
}

void Gradients::scale(double s) {
  for (auto& m : dW) m *= s;
  for (auto& v : db) v *= s;
}

double Gradients::squaredNorm() const {
  double acc = 0.0;
  for (const auto& m : dW) acc += m.squaredNorm();
  for (const auto& v : db) acc += v.squaredNorm();
  return acc;
}

bool Gradients::allFinite() const {
  for (const auto& m : dW)
    if (!m.allFinite()) return false;
  for (const auto& v : db)
    if (!v.allFinite()) return false;
  return true;
}

Gradients zero_gradients(const Mlp& net) {
  Gradients g;
  for (const auto& layer : net.layers) {
    g.dW.push_back(Mat::Zero(layer.W.rows(), layer.W.cols()));
    g.db.push_back(Eigen::VectorXd::Zero(layer.b.size()));
  }
  return g;
}

void backward(const Mlp& net, const ForwardTrace& trace, const Mat& dL_dout, Gradients& grads,
              Mat* dL_dinput) {
  const auto L = net.layers.size();
  Mat abar = dL_dout;
  for (std::size_t l = L; l-- > 0;) {
    const Mat zbar = abar.array() * activate_d(trace.z[l], net.layers[l].act).array();
    grads.dW[l].noalias() += zbar * trace.a[l].transpose();
    grads.db[l] += zbar.rowwise().sum();
    abar = net.layers[l].W.transpose() * zbar;
  }
  if (dL_dinput) *dL_dinput = encode_backward(trace.raw_input, abar, net.pe_frequencies);
}

Mat grad_input(const Mlp& net, const StateVec& x) {
  // forward accumulation through the layers: J <- diag(sigma'(z)) W J
  const Mat X(x);
  Mat J = encode_jacobian(x, net.pe_frequencies);  // enc_dim x D_in
  Mat a = encode(X, net.pe_frequencies);
  for (const auto& layer : net.layers) {
    const Mat z = (layer.W * a).colwise() + layer.b;
    const Mat d = activate_d(z, layer.act);
    J = (layer.W * J).array().colwise() * d.col(0).array();
    a = activate(z, layer.act);
  }
  return J;
}

ParamGradResult grad_params(const Mlp& net, const LossFn& loss, const StateVec& x) {
  ParamGradResult res;
  res.grads = zero_gradients(net);
  const ForwardTrace tr = forward_trace(net, Mat(x));
  const LossEval le = loss(tr.a.back().col(0));
  res.loss = le.value;
  backward(net, tr, Mat(le.grad_out), res.grads);
  return res;
}

DualTrace forward_dual(const Mlp& net, const Mat& X, const Mat& T) {
  DualTrace d;
  d.primal = forward_trace(net, X);
  d.tangent_in = T;
  d.ta.reserve(net.layers.size() + 1);
  d.tz.reserve(net.layers.size());
  d.ta.push_back(encode_tangent(X, T, net.pe_frequencies));
  for (std::size_t l = 0; l < net.layers.size(); ++l) {
    Mat tz = net.layers[l].W * d.ta.back();
    d.ta.push_back(activate_d(d.primal.z[l], net.layers[l].act).array() * tz.array());
    d.tz.push_back(std::move(tz));
  }
  return d;
}

void backward_dual(const Mlp& net, const DualTrace& dual, const Mat& seed_value,
                   const Mat& seed_jvp, Gradients& grads) {
  const auto L = net.layers.size();
  Mat abar = seed_value;
  Mat tbar = seed_jvp;
  for (std::size_t l = L; l-- > 0;) {
    const Mat sd = activate_d(dual.primal.z[l], net.layers[l].act);
    const Mat sdd = activate_dd(dual.primal.z[l], net.layers[l].act);
    const Mat zbar = abar.array() * sd.array() + tbar.array() * sdd.array() * dual.tz[l].array();
    const Mat tzbar = tbar.array() * sd.array();
    grads.dW[l].noalias() += zbar * dual.primal.a[l].transpose();
    grads.dW[l].noalias() += tzbar * dual.ta[l].transpose();
    grads.db[l] += zbar.rowwise().sum();
    abar = net.layers[l].W.transpose() * zbar;
    tbar = net.layers[l].W.transpose() * tzbar;
  }
}

AdamState make_adam(const Mlp& net, double lr) {
  AdamState s;
  s.lr = lr;
  for (const auto& layer : net.layers) {
    s.mW.push_back(Mat::Zero(layer.W.rows(), layer.W.cols()));
    s.vW.push_back(Mat::Zero(layer.W.rows(), layer.W.cols()));
    s.mb.push_back(Eigen::VectorXd::Zero(layer.b.size()));
    s.vb.push_back(Eigen::VectorXd::Zero(layer.b.size()));
  }
  return s;
}

void adam_step(Mlp& net, const Gradients& grads, AdamState& state) {
  if (grads.dW.size() != net.layers.size()) throw std::invalid_argument("adam_step: gradient shape mismatch");
  state.step += 1;
  const double bc1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.step));
  const double bc2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.step));
  for (std::size_t l = 0; l < net.layers.size(); ++l) {
    auto update = [&](auto& p, auto& m, auto& v, const auto& g) {
      m = state.beta1 * m + (1.0 - state.beta1) * g;
      v = state.beta2 * v.array() + (1.0 - state.beta2) * g.array().square();
      p.array() -= state.lr * (m.array() / bc1) / ((v.array() / bc2).sqrt() + state.eps_adam);
    };
    update(net.layers[l].W, state.mW[l], state.vW[l], grads.dW[l]);
    update(net.layers[l].b, state.mb[l], state.vb[l], grads.db[l]);
  }
}

std::string checkpoint_json(const Mlp& net) {
  nlohmann::json j;
  j["format_version"] = 1;
  j["pe_frequencies"] = net.pe_frequencies;
  j["layers"] = nlohmann::json::array();
  for (const auto& layer : net.layers) {
    nlohmann::json lj;
    lj["rows"] = layer.W.rows();
    lj["cols"] = layer.W.cols();
    std::vector<double> w(layer.W.size());
    for (Eigen::Index r = 0; r < layer.W.rows(); ++r)
      for (Eigen::Index c = 0; c < layer.W.cols(); ++c) w[r * layer.W.cols() + c] = layer.W(r, c);
    lj["weights"] = w;
    lj["bias"] = std::vector<double>(layer.b.data(), layer.b.data() + layer.b.size());
    lj["activation"] = to_string(layer.act);
    j["layers"].push_back(std::move(lj));
  }
  return j.dump(2);
}

Mlp mlp_from_checkpoint_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  if (j.at("format_version").get<int>() != 1) throw std::runtime_error("mlp checkpoint: unsupported format version");
  Mlp net;
  net.pe_frequencies = j.value("pe_frequencies", 0);
  for (const auto& lj : j.at("layers")) {
    Layer layer;
    const auto rows = lj.at("rows").get<Eigen::Index>();
    const auto cols = lj.at("cols").get<Eigen::Index>();
    const auto w = lj.at("weights").get<std::vector<double>>();
    if (static_cast<Eigen::Index>(w.size()) != rows * cols) throw std::runtime_error("mlp checkpoint: weight count mismatch");
    layer.W.resize(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r)
      for (Eigen::Index c = 0; c < cols; ++c) layer.W(r, c) = w[r * cols + c];
    const auto b = lj.at("bias").get<std::vector<double>>();
    layer.b = Eigen::Map<const Eigen::VectorXd>(b.data(), static_cast<Eigen::Index>(b.size()));
    layer.act = activation_from_string(lj.at("activation").get<std::string>());
    net.layers.push_back(std::move(layer));
  }
  net.validate();
  return net;
}

void save_checkpoint(const Mlp& net, const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open for writing: " + path.string());
  os << checkpoint_json(net);
}

Mlp load_checkpoint(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open: " + path.string());
  std::string text((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
  return mlp_from_checkpoint_json(text);
}

}  // namespace sdt::nnet
