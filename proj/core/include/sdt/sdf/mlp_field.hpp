#pragma once

#include "sdt/nnet.hpp"
#include "sdt/sdf/field.hpp"

namespace sdt::sdf {

/// Scalar-output network used as an implicit distance function; gradients come
/// from reverse mode through the network.
class MlpSdf final : public SdfField {
 public:
  explicit MlpSdf(nnet::Mlp net);

  int dim() const override { return net_.input_dim(); }
  double value(const StateVec& x) const override;
  StateVec gradient(const StateVec& x) const override;
  std::string kind() const override { return "mlp"; }

  const nnet::Mlp& net() const { return net_; }
  nnet::Mlp& net() { return net_; }

 private:
  nnet::Mlp net_;
};

}  // namespace sdt::sdf
