#include "sdt/sdf/field.hpp"

#include <limits>

namespace sdt::sdf {

StateVec SdfField::gradient(const StateVec& x) const {
  const double h = 1e-5 * std::max(1.0, x.cwiseAbs().maxCoeff());
  StateVec g(x.size());
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    StateVec xp = x, xm = x;
    xp[j] += h;
    xm[j] -= h;
    g[j] = (value(xp) - value(xm)) / (2.0 * h);
  }
  return g;
}

UnionSdf::UnionSdf(std::vector<FieldPtr> parts) : parts_(std::move(parts)) {
  if (parts_.empty()) throw std::invalid_argument("union sdf: empty part list");
  for (const auto& p : parts_)
    if (p->dim() != parts_.front()->dim()) throw std::invalid_argument("union sdf: mixed dimensions");
}

int UnionSdf::dim() const { return parts_.front()->dim(); }

double UnionSdf::value(const StateVec& x) const {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& p : parts_) best = std::min(best, p->value(x));
  return best;
}

std::size_t UnionSdf::achieving_index(const StateVec& x) const {
  std::size_t arg = 0;
  double best = parts_.front()->value(x);
  for (std::size_t i = 1; i < parts_.size(); ++i) {
    const double v = parts_[i]->value(x);
    if (v < best) {  // strict: ties keep the lowest index
      best = v;
      arg = i;
    }
  }
  return arg;
}

StateVec UnionSdf::gradient(const StateVec& x) const { return parts_[achieving_index(x)]->gradient(x); }

}  // namespace sdt::sdf
