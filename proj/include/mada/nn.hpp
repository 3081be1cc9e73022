// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <memory>
#include <unordered_map>
#include <vector>

#include "mada/tape.hpp"
#include "mada/tensor.hpp"

namespace mada {

struct LinearLayer {
  Tensor W;  // in_dim x out_dim
  Tensor b;  // 1 x out_dim

  int in_dim() const { return W.rows; }
  int out_dim() const { return W.cols; }
};

enum class OutAct { kNone, kSoftmax, kSigmoid };

// Relu-activated MLP. Layers are held by shared_ptr so that several
// networks can alias the same underlying parameters (the discriminator
// sharing modes); aliased layers accumulate gradients from every user.
struct Mlp {
  std::vector<std::shared_ptr<LinearLayer>> layers;
  OutAct out_act = OutAct::kNone;
};

// Uniform Xavier/Glorot init: W ~ U[-s, s] with s = sqrt(6/(fan_in+fan_out)),
// biases zero. Pure function of (dims, seed).
Mlp init_params(const std::vector<int>& dims, OutAct out_act, uint64_t seed);

// Leaf node ids for each distinct LinearLayer bound onto a tape. A layer
// shared between networks is bound once, so one leaf accumulates the
// gradient contributions of every branch that uses it.
class ParamBinding {
 public:
  struct LayerNodes {
    NodeId w = -1;
    NodeId b = -1;
  };

  LayerNodes bind(Tape& tape, const std::shared_ptr<LinearLayer>& layer);
  const LayerNodes* find(const LinearLayer* layer) const;

 private:
  std::unordered_map<const LinearLayer*, LayerNodes> nodes_;
};

// Chained affine layers with relu between them and the output activation
// last; every op is recorded on the tape.
NodeId mlp_forward(Tape& tape, const Mlp& mlp, NodeId x, ParamBinding& binding);

// Plain forward pass without a tape, for evaluation.
Tensor mlp_forward_values(const Mlp& mlp, const Tensor& x);

}  // namespace mada
