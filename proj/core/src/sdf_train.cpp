#include "sdt/sdf/train.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

namespace sdt::sdf {

namespace {

double clamp_sym(double v, double delta) { return std::clamp(v, -delta, delta); }

struct GradSeeds {
  double d_value = 0.0;  // dL/d pred
  StateVec d_grad;       // dL/d (spatial gradient)
};

// loss terms that depend on (pred, grad) at the sample point itself
double point_loss(double pred, const StateVec& grad, const TrainSample& rec, const SdfLossWeights& w,
                  GradSeeds* seeds) {
  double loss = 0.0;
  if (seeds) {
    seeds->d_value = 0.0;
    seeds->d_grad = StateVec::Zero(grad.size());
  }

  // clamped L1 reconstruction; 0 is the subgradient of |.| at an exact fit
  const double pc = clamp_sym(pred, w.delta);
  const double dc = clamp_sym(rec.d, w.delta);
  loss += w.w_sdf * std::abs(pc - dc);
  if (seeds && std::abs(pred) < w.delta && std::abs(pc - dc) > 1e-9)
    seeds->d_value += w.w_sdf * (pc > dc ? 1.0 : -1.0);

  // cosine distance to the labeled normal
  const double gn = grad.norm();
  const double tn = rec.g.norm();
  if (gn > 1e-12 && tn > 1e-12) {
    const double cosv = grad.dot(rec.g) / (gn * tn);
    loss += w.w_grad * (1.0 - cosv);
    if (seeds) seeds->d_grad -= w.w_grad * (rec.g / (gn * tn) - (cosv / (gn * gn)) * grad);
  } else {
    loss += w.w_grad;  // no direction information
  }

  // Eikonal residual
  if (gn > 1e-12) {
    loss += w.w_eik * std::abs(gn - 1.0);
    if (seeds && std::abs(gn - 1.0) > 1e-9)
      seeds->d_grad += w.w_eik * (gn > 1.0 ? 1.0 : -1.0) * (grad / gn);
  } else {
    loss += w.w_eik;
  }

  return loss;
}

}  // namespace

DiffField as_diff_field(const SdfField& field) {
  return [&field](const StateVec& x) { return FieldEval{field.value(x), field.gradient(x)}; };
}

double sdf_loss(const DiffField& pred, const TrainSample& record, const SdfLossWeights& w) {
  const FieldEval e = pred(record.x);
  double loss = point_loss(e.value, e.grad, record, w, nullptr);

  if (w.w_ten > 0.0) {
    // Hessian by central differences of the gradient
    const double h = w.tension_step;
    const auto dim = record.x.size();
    double ten = 0.0;
    for (Eigen::Index j = 0; j < dim; ++j) {
      StateVec xp = record.x, xm = record.x;
      xp[j] += h;
      xm[j] -= h;
      const StateVec col = (pred(xp).grad - pred(xm).grad) / (2.0 * h);
      ten += col.squaredNorm();
    }
    loss += w.w_ten * ten;
  }
  return loss;
}

TrainSet sample_train_set(const SdfField& shape, const Bounds& bounds, int n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("sample_train_set: n must be >= 1");
  bounds.validate();
  if (bounds.dim() != shape.dim()) throw std::invalid_argument("sample_train_set: bounds/shape dim mismatch");

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  // jittered grid: one sample per cell, scanning rows until n are produced
  const int per_axis = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(n))));
  const StateVec extent = bounds.hi - bounds.lo;
  TrainSet set;
  set.reserve(n);
  for (int row = 0; row < per_axis && static_cast<int>(set.size()) < n; ++row) {
    for (int col = 0; col < per_axis && static_cast<int>(set.size()) < n; ++col) {
      StateVec x(2);
      x[0] = bounds.lo[0] + extent[0] * (col + unit(rng)) / per_axis;
      x[1] = bounds.lo[1] + extent[1] * (row + unit(rng)) / per_axis;
      TrainSample rec;
      rec.d = shape.value(x);
      rec.g = shape.gradient(x);
      const double gn = rec.g.norm();
      if (gn > 1e-12) rec.g /= gn;
      rec.x = std::move(x);
      set.push_back(std::move(rec));
    }
  }
  return set;
}

Bounds bounds_of(const TrainSet& set) {
  if (set.empty()) throw std::invalid_argument("bounds_of: empty train set");
  Bounds b;
  b.lo = set.front().x;
  b.hi = set.front().x;
  for (const auto& rec : set) {
    b.lo = b.lo.cwiseMin(rec.x);
    b.hi = b.hi.cwiseMax(rec.x);
  }
  return b;
}

void write_train_set_csv(const std::filesystem::path& path, const TrainSet& set) {
  if (set.empty()) throw std::invalid_argument("write_train_set_csv: empty set");
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open for writing: " + path.string());
  const auto dim = set.front().x.size();
  for (Eigen::Index j = 0; j < dim; ++j) os << "x" << (j + 1) << ",";
  os << "d";
  for (Eigen::Index j = 0; j < dim; ++j) os << ",g" << (j + 1);
  os << "\n";
  char buf[32];
  auto put = [&](double v, char sep) {
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    os << buf << sep;
  };
  for (const auto& rec : set) {
    for (Eigen::Index j = 0; j < dim; ++j) put(rec.x[j], ',');
    put(rec.d, ',');
    for (Eigen::Index j = 0; j + 1 < dim; ++j) put(rec.g[j], ',');
    std::snprintf(buf, sizeof(buf), "%.17g", rec.g[dim - 1]);
    os << buf << "\n";
  }
}

TrainSet read_train_set_csv(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open: " + path.string());
  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error("train set csv: empty file");
  const auto cols = static_cast<Eigen::Index>(std::count(line.begin(), line.end(), ',') + 1);
  const Eigen::Index dim = (cols - 1) / 2;
  if (cols != 2 * dim + 1) throw std::runtime_error("train set csv: malformed header");
  TrainSet set;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> row;
    while (std::getline(ss, cell, ',')) {
      double v = 0.0;
      auto [p, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (ec != std::errc{}) throw std::runtime_error("train set csv: bad number");
      row.push_back(v);
    }
    if (static_cast<Eigen::Index>(row.size()) != cols) throw std::runtime_error("train set csv: ragged row");
    TrainSample rec;
    rec.x = Eigen::Map<const StateVec>(row.data(), dim);
    rec.d = row[dim];
    rec.g = Eigen::Map<const StateVec>(row.data() + dim + 1, dim);
    set.push_back(std::move(rec));
  }
  return set;
}

// ---- MLP trainer ----

namespace {

struct Batch {
  Mat X;         // 2 x B
  Mat d;         // 1 x B
  Mat g;         // 2 x B (unit targets)
};

Batch gather(const TrainSet& set, const std::vector<int>& idx, int begin, int end) {
  Batch b;
  const int n = end - begin;
  b.X.resize(2, n);
  b.d.resize(1, n);
  b.g.resize(2, n);
  for (int k = 0; k < n; ++k) {
    const auto& rec = set[idx[begin + k]];
    b.X.col(k) = rec.x;
    b.d(0, k) = rec.d;
    b.g.col(k) = rec.g;
  }
  return b;
}

// value/grad predictions with attached traces for one batch
struct MlpBatchEval {
  nnet::DualTrace dual_x, dual_y;
  Mat pred;    // 1 x B
  Mat grad;    // 2 x B
};

MlpBatchEval eval_mlp_batch(const nnet::Mlp& net, const Mat& X) {
  MlpBatchEval ev;
  const int n = static_cast<int>(X.cols());
  Mat tx = Mat::Zero(2, n), ty = Mat::Zero(2, n);
  tx.row(0).setOnes();
  ty.row(1).setOnes();
  ev.dual_x = nnet::forward_dual(net, X, tx);
  ev.dual_y = nnet::forward_dual(net, X, ty);
  ev.pred = ev.dual_x.primal.a.back();
  ev.grad.resize(2, n);
  ev.grad.row(0) = ev.dual_x.ta.back();
  ev.grad.row(1) = ev.dual_y.ta.back();
  return ev;
}

}  // namespace

MlpSdf train_mlp_sdf(const TrainSet& set, const std::vector<int>& arch, const SdfTrainConfig& cfg) {
  if (set.empty()) throw std::invalid_argument("train_mlp_sdf: empty train set");
  nnet::Mlp net = nnet::make_mlp(2, arch, 1, nnet::Activation::Relu, cfg.seed);
  nnet::AdamState adam = nnet::make_adam(net, cfg.lr);

  std::mt19937_64 rng(cfg.seed ^ 0x9e3779b97f4a7c15ull);
  std::vector<int> idx(set.size());
  std::iota(idx.begin(), idx.end(), 0);

  const SdfLossWeights& w = cfg.weights;
  nnet::Mlp last_finite = net;

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::shuffle(idx.begin(), idx.end(), rng);
    double epoch_loss = 0.0;
    for (int begin = 0; begin < static_cast<int>(set.size()); begin += cfg.batch_size) {
      const int end = std::min<int>(begin + cfg.batch_size, static_cast<int>(set.size()));
      const Batch batch = gather(set, idx, begin, end);
      const int n = end - begin;

      MlpBatchEval ev = eval_mlp_batch(net, batch.X);

      Mat seed_val = Mat::Zero(1, n);
      Mat seed_gx = Mat::Zero(1, n);
      Mat seed_gy = Mat::Zero(1, n);
      for (int k = 0; k < n; ++k) {
        TrainSample rec;
        rec.d = batch.d(0, k);
        rec.g = batch.g.col(k);
        GradSeeds seeds;
        epoch_loss += point_loss(ev.pred(0, k), ev.grad.col(k), rec, w, &seeds);
        seed_val(0, k) = seeds.d_value;
        seed_gx(0, k) = seeds.d_grad[0];
        seed_gy(0, k) = seeds.d_grad[1];
      }

      nnet::Gradients grads = nnet::zero_gradients(net);
      nnet::backward_dual(net, ev.dual_x, seed_val, seed_gx, grads);
      nnet::backward_dual(net, ev.dual_y, Mat::Zero(1, n), seed_gy, grads);

      if (w.w_ten > 0.0) {
        // tension: seeds on the gradient at the four stencil points
        const double h = w.tension_step;
        for (int axis = 0; axis < 2; ++axis) {
          Mat Xp = batch.X, Xm = batch.X;
          Xp.row(axis).array() += h;
          Xm.row(axis).array() -= h;
          MlpBatchEval evp = eval_mlp_batch(net, Xp);
          MlpBatchEval evm = eval_mlp_batch(net, Xm);
          const Mat Hcol = (evp.grad - evm.grad) / (2.0 * h);  // 2 x B, column j of the Hessian
          epoch_loss += w.w_ten * Hcol.squaredNorm();
          const Mat dH = (2.0 * w.w_ten / (2.0 * h)) * Hcol;
          const Mat zero = Mat::Zero(1, n);
          nnet::backward_dual(net, evp.dual_x, zero, dH.row(0), grads);
          nnet::backward_dual(net, evp.dual_y, zero, dH.row(1), grads);
          nnet::backward_dual(net, evm.dual_x, zero, (-dH.row(0)).eval(), grads);
          nnet::backward_dual(net, evm.dual_y, zero, (-dH.row(1)).eval(), grads);
        }
      }

      grads.scale(1.0 / n);
      if (!grads.allFinite()) return MlpSdf(last_finite);
      nnet::adam_step(net, grads, adam);
    }
    if (!std::isfinite(epoch_loss)) return MlpSdf(last_finite);
    last_finite = net;
  }
  return MlpSdf(std::move(net));
}

// ---- Bernstein trainer ----

BernsteinSdf train_bernstein_sdf(const TrainSet& set, int degree, const SdfTrainConfig& cfg) {
  if (set.empty()) throw std::invalid_argument("train_bernstein_sdf: empty train set");
  Bounds bounds = bounds_of(set);
  // pad so every sample is strictly inside the normalized box
  const StateVec pad = 1e-9 * (bounds.hi - bounds.lo).cwiseMax(1.0);
  bounds.lo -= pad;
  bounds.hi += pad;

  const int m = degree + 1;
  BernsteinSdf field(degree, bounds, Mat::Zero(m, m));

  // least-squares warm start on the distance values (tiny ridge for rank safety)
  {
    Mat phi(set.size(), m * m);
    Eigen::VectorXd rhs(set.size());
    Eigen::VectorXd bu, bv, dbu, dbv;
    double su, sv;
    for (std::size_t i = 0; i < set.size(); ++i) {
      field.basis_at(set[i].x, bu, bv, dbu, dbv, su, sv);
      for (int r = 0; r < m; ++r)
        for (int c = 0; c < m; ++c) phi(static_cast<Eigen::Index>(i), r * m + c) = bu[r] * bv[c];
      rhs[static_cast<Eigen::Index>(i)] = set[i].d;
    }
    const Mat normal = phi.transpose() * phi + 1e-9 * Mat::Identity(m * m, m * m);
    const Eigen::VectorXd sol = normal.ldlt().solve(phi.transpose() * rhs);
    for (int r = 0; r < m; ++r)
      for (int c = 0; c < m; ++c) field.coefficients()(r, c) = sol[r * m + c];
  }

  // gradient-descent refinement on the full loss suite (stationary once the
  // warm start is exact, unlike scale-invariant optimizers)
  const SdfLossWeights& w = cfg.weights;
  std::mt19937_64 rng(cfg.seed ^ 0x5851f42d4c957f2dull);
  std::vector<int> idx(set.size());
  std::iota(idx.begin(), idx.end(), 0);

  Eigen::VectorXd bu, bv, dbu, dbv;
  double su, sv;
  auto grad_of_record = [&](const TrainSample& rec, Mat& dC) -> double {
    field.basis_at(rec.x, bu, bv, dbu, dbv, su, sv);
    const double pred = bu.dot(field.coefficients() * bv);
    StateVec g(2);
    g[0] = su * dbu.dot(field.coefficients() * bv);
    g[1] = sv * bu.dot(field.coefficients() * dbv);
    GradSeeds seeds;
    const double loss = point_loss(pred, g, rec, w, &seeds);
    dC.noalias() += seeds.d_value * (bu * bv.transpose());
    dC.noalias() += seeds.d_grad[0] * su * (dbu * bv.transpose());
    dC.noalias() += seeds.d_grad[1] * sv * (bu * dbv.transpose());
    return loss;
  };

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::shuffle(idx.begin(), idx.end(), rng);
    for (int begin = 0; begin < static_cast<int>(set.size()); begin += cfg.batch_size) {
      const int end = std::min<int>(begin + cfg.batch_size, static_cast<int>(set.size()));
      Mat dC = Mat::Zero(m, m);
      for (int k = begin; k < end; ++k) grad_of_record(set[idx[k]], dC);
      if (w.w_ten > 0.0) {
        const double h = w.tension_step;
        for (int k = begin; k < end; ++k) {
          const auto& rec = set[idx[k]];
          for (int axis = 0; axis < 2; ++axis) {
            StateVec xp = rec.x, xm = rec.x;
            xp[axis] += h;
            xm[axis] -= h;
            const StateVec col = (field.gradient(xp) - field.gradient(xm)) / (2.0 * h);
            // d(|col|^2)/dC through both stencil gradients
            for (int s = 0; s < 2; ++s) {
              const StateVec& xq = s == 0 ? xp : xm;
              const double sign = s == 0 ? 1.0 : -1.0;
              field.basis_at(xq, bu, bv, dbu, dbv, su, sv);
              dC.noalias() += (w.w_ten * sign / h) * col[0] * su * (dbu * bv.transpose());
              dC.noalias() += (w.w_ten * sign / h) * col[1] * sv * (bu * dbv.transpose());
            }
          }
        }
      }
      dC /= (end - begin);
      if (!dC.allFinite()) return field;
      field.coefficients() -= cfg.lr * dC;
    }
  }
  return field;
}

double mean_abs_error(const SdfField& field, const TrainSet& samples) {
  if (samples.empty()) throw std::invalid_argument("mean_abs_error: empty sample set");
  double acc = 0.0;
  for (const auto& rec : samples) acc += std::abs(field.value(rec.x) - rec.d);
  return acc / samples.size();
}

double mean_eikonal_residual(const SdfField& field, const TrainSet& samples, double band_lo,
                             double band_hi) {
  double acc = 0.0;
  int count = 0;
  for (const auto& rec : samples) {
    if (rec.d <= band_lo || rec.d > band_hi) continue;
    acc += std::abs(field.gradient(rec.x).norm() - 1.0);
    count += 1;
  }
  if (count == 0) throw std::invalid_argument("mean_eikonal_residual: no samples in band");
  return acc / count;
}

}  // namespace sdt::sdf
