#pragma once

#include "sdt/sdf/bernstein.hpp"
#include "sdt/sdf/field.hpp"
#include "sdt/sdf/mlp_field.hpp"

#include <cstdint>
#include <functional>

namespace sdt::sdf {

struct TrainSample {
  StateVec x;
  double d = 0.0;
  StateVec g;
};
using TrainSet = std::vector<TrainSample>;

/// Grid-jittered uniform samples over `bounds`, labeled with the analytic
/// distance and unit gradient of `shape`. Deterministic under `seed`.
TrainSet sample_train_set(const SdfField& shape, const Bounds& bounds, int n, std::uint64_t seed);

Bounds bounds_of(const TrainSet& set);

void write_train_set_csv(const std::filesystem::path& path, const TrainSet& set);
TrainSet read_train_set_csv(const std::filesystem::path& path);

struct SdfLossWeights {
  double w_sdf = 10.0;
  double w_grad = 0.1;
  double w_eik = 0.01;
  double w_ten = 0.01;
  double delta = 1.0;          // clamp bound for the reconstruction term
  double tension_step = 1e-3;  // FD step for the gradient-of-gradient stencil
};

/// One differentiable-field evaluation: value and spatial gradient at x.
struct FieldEval {
  double value = 0.0;
  StateVec grad;
};
using DiffField = std::function<FieldEval(const StateVec&)>;

DiffField as_diff_field(const SdfField& field);

/// Weighted sum of clamped-L1 reconstruction, cosine gradient distance,
/// Eikonal residual and Hessian-norm tension for a single labeled record.
double sdf_loss(const DiffField& pred, const TrainSample& record, const SdfLossWeights& w);

struct SdfTrainConfig {
  int epochs = 500;
  double lr = 1e-3;
  int batch_size = 256;
  SdfLossWeights weights;
  std::uint64_t seed = 0;
};

/// MLP field trained with Adam on the loss suite; gradient-based terms are
/// differentiated exactly through the network input gradient.
MlpSdf train_mlp_sdf(const TrainSet& set, const std::vector<int>& arch, const SdfTrainConfig& cfg);

/// Tensor-product Bernstein field: least-squares warm start on the distance
/// values, then Adam refinement on the full loss suite.
BernsteinSdf train_bernstein_sdf(const TrainSet& set, int degree, const SdfTrainConfig& cfg);

// evaluation helpers
double mean_abs_error(const SdfField& field, const TrainSet& samples);
/// Mean |  |grad| - 1 | over samples with d in (band_lo, band_hi].
double mean_eikonal_residual(const SdfField& field, const TrainSet& samples, double band_lo,
                             double band_hi);

}  // namespace sdt::sdf
