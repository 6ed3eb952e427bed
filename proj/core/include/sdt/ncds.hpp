#pragma once

#include "sdt/nnet.hpp"
#include "sdt/types.hpp"

#include <filesystem>

namespace sdt::ncds {

/// Contractive-by-construction dynamics: a network J_theta(x) models the
/// square root of the Jacobian, and the velocity field is recovered by a line
/// integral from the anchor (x0, xdot0).
struct NcdsModel {
  nnet::Mlp jac_net;      // maps R^D -> R^{D*D} (row-major square root)
  Eigen::VectorXd eps;    // eigenvalue bound, entries > 0
  StateVec x0;
  StateVec xdot0;
  int quad_steps = 2;

  int dim() const { return static_cast<int>(eps.size()); }
  void validate() const;
};

/// J_hat(x) = -(J_theta^T J_theta + diag(eps)); symmetric with
/// sym_max_eig <= -min(eps) by construction.
Mat jacobian_hat(const NcdsModel& model, const StateVec& x);

/// xdot = xdot0 + integral_0^1 J_hat(c(x,t)) (x - x0) dt along the straight
/// line c(x,t) = (1-t) x0 + t x, evaluated with quad_steps RK4 (3/8) steps.
StateVec velocity(const NcdsModel& model, const StateVec& x);

VectorField as_field(const NcdsModel& model);

/// Demonstrations at a uniform sampling interval.
struct DemoBatch {
  std::vector<std::vector<StateVec>> demos;
  double dt = 1.0;

  int dim() const;
  void validate() const;
};

DemoBatch resample(const DemoBatch& batch, int length);
DemoBatch demo_batch_from_trajectories(const std::vector<Trajectory>& trajs, int length);

enum class LossSignMode { Corrected, PaperVerbatim };

struct LossConfig {
  double beta_eps = 1e-3;
  double beta_noise = 1.0;
  double noise_sigma = 0.0;
  LossSignMode sign_mode = LossSignMode::Corrected;
};

struct LossBreakdown {
  double total = 0.0;
  double jac = 0.0;    // reconstruction
  double eps = 0.0;    // eigenvalue-bound spread regularizer
  double noise = 0.0;  // noise-injected reconstruction
  int zero_velocity_steps = 0;  // steps that fell back to the fixed-axis complement
};

/// Loss and (optionally) exact gradients w.r.t. network parameters and eps.
LossBreakdown loss_total(const NcdsModel& model, const DemoBatch& batch, const LossConfig& cfg,
                         std::uint64_t noise_seed, nnet::Gradients* net_grads = nullptr,
                         Eigen::VectorXd* eps_grads = nullptr);

struct TrainConfig {
  int epochs = 1000;
  double lr = 1e-3;
  int decay_every = 250;
  double decay_factor = 0.1;
  LossConfig loss;
  std::uint64_t seed = 0;
};

struct TrainResult {
  NcdsModel model;
  std::vector<double> loss_curve;
  bool aborted = false;  // non-finite loss; model is the last finite checkpoint
  int zero_velocity_steps = 0;
};

TrainResult train(NcdsModel model, const DemoBatch& batch, const TrainConfig& cfg);

/// Fresh model anchored at the first demonstration sample: x0 is the first
/// state, xdot0 the first finite-difference velocity.
NcdsModel make_model(const DemoBatch& batch, const std::vector<int>& hidden, double eps_init,
                     std::uint64_t seed, int quad_steps = 2);

void save_model(const NcdsModel& model, const std::filesystem::path& path);
NcdsModel load_model(const std::filesystem::path& path);

}  // namespace sdt::ncds
