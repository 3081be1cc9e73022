// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <memory>
#include <vector>

#include "mada/nn.hpp"
#include "mada/tensor.hpp"

namespace mada {

// One optimizable layer plus its learning-rate multiplier. The layers
// trained from scratch on top of the feature extractor (label predictor,
// discriminators) run at 10x by default, mirroring the usual fine-tuning
// split even though everything here is from scratch.
struct ParamGroup {
  std::shared_ptr<LinearLayer> layer;
  double lr_mult = 1.0;
};

// SGD with classical momentum:
//   v <- momentum * v + g
//   theta <- theta - eta * lr_mult * v
// Velocities are stored per group in (W, b) pairs, zero at construction.
class SgdMomentum {
 public:
  SgdMomentum(const std::vector<ParamGroup>& groups, double momentum = 0.9);

  // grads_w[i] / grads_b[i] are the gradients for groups[i]; eta is the
  // already-scheduled base learning rate for this step.
  void step(const std::vector<ParamGroup>& groups, const std::vector<Tensor>& grads_w,
            const std::vector<Tensor>& grads_b, double eta);

  double momentum() const { return momentum_; }

 private:
  double momentum_;
  std::vector<Tensor> vel_w_;
  std::vector<Tensor> vel_b_;
};

}  // namespace mada
