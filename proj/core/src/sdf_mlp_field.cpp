#include "sdt/sdf/mlp_field.hpp"

namespace sdt::sdf {

MlpSdf::MlpSdf(nnet::Mlp net) : net_(std::move(net)) {
  net_.validate();
  if (net_.output_dim() != 1) throw std::invalid_argument("mlp sdf: network must have scalar output");
}

double MlpSdf::value(const StateVec& x) const { return nnet::forward(net_, x)[0]; }

StateVec MlpSdf::gradient(const StateVec& x) const { return nnet::grad_input(net_, x).row(0).transpose(); }

}  // namespace sdt::sdf
