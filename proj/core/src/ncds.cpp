#include "sdt/ncds.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <fstream>
#include <random>

namespace sdt::ncds {

namespace {

// quadrature nodes/weights of quad_steps composite RK4 (3/8) steps on [0, 1];
// the integrand does not depend on the running value, so RK4 reduces to the
// 3/8 quadrature rule per step (exact for cubics)
void quad_nodes(int steps, std::vector<double>& t, std::vector<double>& w) {
  t.clear();
  w.clear();
  const double h = 1.0 / steps;
  for (int i = 0; i < steps; ++i) {
    const double t0 = i * h;
    t.insert(t.end(), {t0, t0 + h / 3.0, t0 + 2.0 * h / 3.0, t0 + h});
    w.insert(w.end(), {h / 8.0, 3.0 * h / 8.0, 3.0 * h / 8.0, h / 8.0});
  }
}

Mat reshape_sqrt(const Eigen::Ref<const Eigen::VectorXd>& col, int d) {
  Mat J(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) J(i, j) = col[i * d + j];
  return J;
}

}  // namespace

void NcdsModel::validate() const {
  jac_net.validate();
  const int d = dim();
  if (d < 1) throw std::invalid_argument("ncds: eps must be non-empty");
  if (!(eps.minCoeff() > 0.0)) throw std::invalid_argument("ncds: eps entries must be > 0");
  if (jac_net.input_dim() != d || jac_net.output_dim() != d * d)
    throw std::invalid_argument("ncds: jac_net must map R^D -> R^{D*D}");
  if (x0.size() != d || xdot0.size() != d) throw std::invalid_argument("ncds: anchor dimension mismatch");
  if (quad_steps < 1) throw std::invalid_argument("ncds: quad_steps must be >= 1");
}

Mat jacobian_hat(const NcdsModel& model, const StateVec& x) {
  const int d = model.dim();
  const Mat J = reshape_sqrt(nnet::forward(model.jac_net, x), d);
  Mat out = -(J.transpose() * J);
  out.diagonal() -= model.eps;
  return out;
}

StateVec velocity(const NcdsModel& model, const StateVec& x) {
  const int d = model.dim();
  std::vector<double> t, w;
  quad_nodes(model.quad_steps, t, w);
  const StateVec u = x - model.x0;
  Mat C(d, t.size());
  for (std::size_t k = 0; k < t.size(); ++k) C.col(k) = (1.0 - t[k]) * model.x0 + t[k] * x;
  const Mat O = nnet::forward(model.jac_net, C);
  StateVec v = model.xdot0;
  for (std::size_t k = 0; k < t.size(); ++k) {
    const Mat J = reshape_sqrt(O.col(k), d);
    StateVec contrib = -(J.transpose() * (J * u));
    contrib -= model.eps.cwiseProduct(u);
    v += w[k] * contrib;
  }
  return v;
}

VectorField as_field(const NcdsModel& model) {
  return [model](const StateVec& x) { return velocity(model, x); };
}

int DemoBatch::dim() const {
  return demos.empty() || demos.front().empty() ? 0 : static_cast<int>(demos.front().front().size());
}

void DemoBatch::validate() const {
  if (demos.empty()) throw std::invalid_argument("demo batch: empty");
  if (!(dt > 0.0)) throw std::invalid_argument("demo batch: dt must be > 0");
  const int d = dim();
  for (const auto& demo : demos) {
    if (demo.size() < 2) throw std::invalid_argument("demo batch: demos need at least 2 samples");
    for (const auto& s : demo)
      if (static_cast<int>(s.size()) != d) throw std::invalid_argument("demo batch: mixed dimensions");
  }
}

DemoBatch resample(const DemoBatch& batch, int length) {
  if (length < 2) throw std::invalid_argument("resample: length must be >= 2");
  batch.validate();
  DemoBatch out;
  out.demos.reserve(batch.demos.size());
  for (const auto& demo : batch.demos) {
    std::vector<StateVec> res(length);
    const double scale = static_cast<double>(demo.size() - 1) / (length - 1);
    for (int i = 0; i < length; ++i) {
      const double s = i * scale;
      const auto lo = std::min<std::size_t>(static_cast<std::size_t>(s), demo.size() - 2);
      const double frac = s - lo;
      res[i] = (1.0 - frac) * demo[lo] + frac * demo[lo + 1];
    }
    out.demos.push_back(std::move(res));
  }
  // preserve total duration
  out.dt = batch.dt * static_cast<double>(batch.demos.front().size() - 1) / (length - 1);
  return out;
}

DemoBatch demo_batch_from_trajectories(const std::vector<Trajectory>& trajs, int length) {
  if (trajs.empty()) throw std::invalid_argument("demo batch: no trajectories");
  DemoBatch out;
  double duration = 0.0;
  for (const auto& traj : trajs) {
    traj.validate();
    if (traj.size() < 2) throw std::invalid_argument("demo batch: trajectory too short");
    duration += traj.duration();
    std::vector<StateVec> demo(length);
    for (int i = 0; i < length; ++i) {
      const double t = traj.times.front() + traj.duration() * i / (length - 1);
      // locate the bracketing segment
      std::size_t lo = 0;
      while (lo + 2 < traj.size() && traj.times[lo + 1] <= t) ++lo;
      const double span = traj.times[lo + 1] - traj.times[lo];
      const double frac = std::clamp((t - traj.times[lo]) / span, 0.0, 1.0);
      demo[i] = (1.0 - frac) * traj.states[lo] + frac * traj.states[lo + 1];
    }
    out.demos.push_back(std::move(demo));
  }
  out.dt = (duration / trajs.size()) / (length - 1);
  return out;
}

LossBreakdown loss_total(const NcdsModel& model, const DemoBatch& batch, const LossConfig& cfg,
                         std::uint64_t noise_seed, nnet::Gradients* net_grads,
                         Eigen::VectorXd* eps_grads) {
  model.validate();
  batch.validate();
  if (cfg.beta_eps < 0.0 || cfg.beta_noise < 0.0) throw std::invalid_argument("ncds loss: beta weights must be >= 0");
  const int d = model.dim();
  const double sign = cfg.sign_mode == LossSignMode::Corrected ? 1.0 : -1.0;

  LossBreakdown out;
  if (net_grads) *net_grads = nnet::zero_gradients(model.jac_net);
  if (eps_grads) *eps_grads = Eigen::VectorXd::Zero(d);

  std::vector<double> qt, qw;
  quad_nodes(model.quad_steps, qt, qw);
  const int K = static_cast<int>(qt.size());

  std::mt19937_64 rng(noise_seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  // gather transition pairs; the noise pass adds perturbed copies
  struct Pair {
    StateVec from;
    StateVec to;
    bool noisy = false;
  };
  std::vector<Pair> pairs;
  for (const auto& demo : batch.demos) {
    for (std::size_t t = 0; t + 1 < demo.size(); ++t) {
      pairs.push_back({demo[t], demo[t + 1], false});
      if (cfg.beta_noise > 0.0) {
        StateVec step = demo[t + 1] - demo[t];
        StateVec unit;
        if (step.norm() < 1e-12) {
          unit = StateVec::Zero(d);
          unit[0] = 1.0;  // fixed-axis fallback
          out.zero_velocity_steps += 1;
        } else {
          unit = step / step.norm();
        }
        StateVec noise(d);
        for (int j = 0; j < d; ++j) noise[j] = cfg.noise_sigma * gauss(rng);
        noise -= noise.dot(unit) * unit;  // project onto the orthogonal complement
        pairs.push_back({demo[t] + noise, demo[t + 1], true});
      }
    }
  }

  long n_clean = 0, n_noisy = 0;
  for (const auto& p : pairs) (p.noisy ? n_noisy : n_clean) += 1;

  // one batched network pass over every quadrature node of every pair
  Mat C(d, static_cast<Eigen::Index>(pairs.size()) * K);
  for (std::size_t p = 0; p < pairs.size(); ++p)
    for (int k = 0; k < K; ++k)
      C.col(static_cast<Eigen::Index>(p) * K + k) = (1.0 - qt[k]) * model.x0 + qt[k] * pairs[p].from;

  const bool want_grads = net_grads != nullptr || eps_grads != nullptr;
  nnet::ForwardTrace trace;
  Mat O;
  if (net_grads) {
    trace = nnet::forward_trace(model.jac_net, C);
    O = trace.a.back();
  } else {
    O = nnet::forward(model.jac_net, C);
  }

  Mat seeds;
  if (net_grads) seeds = Mat::Zero(d * d, O.cols());

  const double dt = batch.dt;
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    const StateVec u = pairs[p].from - model.x0;
    StateVec v = model.xdot0;
    std::vector<Mat> roots(K);
    for (int k = 0; k < K; ++k) {
      roots[k] = reshape_sqrt(O.col(static_cast<Eigen::Index>(p) * K + k), d);
      StateVec contrib = -(roots[k].transpose() * (roots[k] * u));
      contrib -= model.eps.cwiseProduct(u);
      v += qw[k] * contrib;
    }
    const StateVec residual = pairs[p].to - (pairs[p].from + dt * v);
    const double sq = residual.squaredNorm();
    const bool noisy = pairs[p].noisy;
    const double denom = static_cast<double>(noisy ? n_noisy : n_clean);
    const double weight = noisy ? sign * cfg.beta_noise : 1.0;
    (noisy ? out.noise : out.jac) += sq / denom;

    if (want_grads) {
      // dL/dv = -2 dt residual * weight / denom
      const StateVec r = (-2.0 * dt * weight / denom) * residual;
      for (int k = 0; k < K; ++k) {
        if (net_grads) {
          const Mat G = (qw[k] * r) * u.transpose();   // dL/dJ_hat at this node
          const Mat dRoot = -roots[k] * (G + G.transpose());
          for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) seeds(i * d + j, static_cast<Eigen::Index>(p) * K + k) = dRoot(i, j);
        }
        if (eps_grads) *eps_grads += -qw[k] * r.cwiseProduct(u);
      }
    }
  }

  if (net_grads) nnet::backward(model.jac_net, trace, seeds, *net_grads);

  // state-independent eps-spread regularizer
  double spread = 0.0;
  for (int n = 1; n < d; ++n) {
    const double diff = model.eps[0] - model.eps[n];
    spread += diff * diff;
    if (eps_grads) {
      (*eps_grads)[0] += sign * cfg.beta_eps * 2.0 * diff;
      (*eps_grads)[n] -= sign * cfg.beta_eps * 2.0 * diff;
    }
  }
  out.eps = sign * spread;
  out.noise *= sign;
  out.total = out.jac + cfg.beta_eps * out.eps + cfg.beta_noise * out.noise;
  return out;
}

NcdsModel make_model(const DemoBatch& batch, const std::vector<int>& hidden, double eps_init,
                     std::uint64_t seed, int quad_steps) {
  batch.validate();
  const int d = batch.dim();
  NcdsModel m;
  m.jac_net = nnet::make_mlp(d, hidden, d * d, nnet::Activation::Tanh, seed);
  m.eps = Eigen::VectorXd::Constant(d, eps_init);
  // anchor the line integral at the demonstrated attractor with zero velocity;
  // this pins the equilibrium of the learned field at the shared target
  StateVec goal = StateVec::Zero(d);
  for (const auto& demo : batch.demos) goal += demo.back();
  m.x0 = goal / static_cast<double>(batch.demos.size());
  m.xdot0 = StateVec::Zero(d);
  m.quad_steps = quad_steps;
  m.validate();
  return m;
}

TrainResult train(NcdsModel model, const DemoBatch& batch, const TrainConfig& cfg) {
  if (cfg.epochs < 0 || !(cfg.lr > 0.0) || cfg.decay_every < 1 || !(cfg.decay_factor > 0.0))
    throw std::invalid_argument("ncds train: hyperparameters must be positive");
  model.validate();

  TrainResult result;
  nnet::AdamState adam = nnet::make_adam(model.jac_net, cfg.lr);
  Eigen::VectorXd eps_m = Eigen::VectorXd::Zero(model.dim());
  Eigen::VectorXd eps_v = Eigen::VectorXd::Zero(model.dim());

  NcdsModel last_finite = model;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    adam.lr = cfg.lr * std::pow(cfg.decay_factor, epoch / cfg.decay_every);
    nnet::Gradients grads;
    Eigen::VectorXd eps_grads;
    const LossBreakdown loss =
        loss_total(model, batch, cfg.loss, cfg.seed + 0x1000ull * epoch, &grads, &eps_grads);
    result.zero_velocity_steps += loss.zero_velocity_steps;
    if (!std::isfinite(loss.total) || !grads.allFinite() || !eps_grads.allFinite()) {
      result.aborted = true;
      result.model = last_finite;
      return result;
    }
    result.loss_curve.push_back(loss.total);
    last_finite = model;
    nnet::adam_step(model.jac_net, grads, adam);
    // shared Adam clock for eps
    const double bc1 = 1.0 - std::pow(adam.beta1, static_cast<double>(adam.step));
    const double bc2 = 1.0 - std::pow(adam.beta2, static_cast<double>(adam.step));
    eps_m = adam.beta1 * eps_m + (1.0 - adam.beta1) * eps_grads;
    eps_v = adam.beta2 * eps_v.array() + (1.0 - adam.beta2) * eps_grads.array().square();
    model.eps.array() -= adam.lr * (eps_m.array() / bc1) / ((eps_v.array() / bc2).sqrt() + adam.eps_adam);
    model.eps = model.eps.cwiseMax(1e-6);  // keep the bound strictly positive
  }
  result.model = std::move(model);
  return result;
}

void save_model(const NcdsModel& model, const std::filesystem::path& path) {
  nlohmann::json j = nlohmann::json::parse(nnet::checkpoint_json(model.jac_net));
  j["ncds_version"] = 1;
  j["eps"] = std::vector<double>(model.eps.data(), model.eps.data() + model.eps.size());
  j["x0"] = std::vector<double>(model.x0.data(), model.x0.data() + model.x0.size());
  j["xdot0"] = std::vector<double>(model.xdot0.data(), model.xdot0.data() + model.xdot0.size());
  j["quad_steps"] = model.quad_steps;
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open for writing: " + path.string());
  os << j.dump(2);
}

NcdsModel load_model(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open: " + path.string());
  nlohmann::json j;
  is >> j;
  NcdsModel m;
  m.jac_net = nnet::mlp_from_checkpoint_json(j.dump());
  const auto eps = j.at("eps").get<std::vector<double>>();
  m.eps = Eigen::Map<const Eigen::VectorXd>(eps.data(), static_cast<Eigen::Index>(eps.size()));
  const auto x0 = j.at("x0").get<std::vector<double>>();
  m.x0 = Eigen::Map<const StateVec>(x0.data(), static_cast<Eigen::Index>(x0.size()));
  const auto xd = j.at("xdot0").get<std::vector<double>>();
  m.xdot0 = Eigen::Map<const StateVec>(xd.data(), static_cast<Eigen::Index>(xd.size()));
  m.quad_steps = j.at("quad_steps").get<int>();
  m.validate();
  return m;
}

}  // namespace sdt::ncds
