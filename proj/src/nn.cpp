// SPDX-License-Identifier: Apache-2.0

#include "mada/nn.hpp"

#include <cmath>
#include <stdexcept>

#include "mada/rng.hpp"

namespace mada {

Mlp init_params(const std::vector<int>& dims, OutAct out_act, uint64_t seed) {
  if (dims.size() < 2) throw std::invalid_argument("init_params: need at least [in, out] dims");
  Rng rng(seed);
  Mlp mlp;
  mlp.out_act = out_act;
  for (size_t i = 0; i + 1 < dims.size(); ++i) {
    int in = dims[i], out = dims[i + 1];
    if (in <= 0 || out <= 0) throw std::invalid_argument("init_params: nonpositive dimension");
    auto layer = std::make_shared<LinearLayer>();
    layer->W = Tensor(in, out);
    double s = std::sqrt(6.0 / (in + out));
    for (double& w : layer->W.v) w = rng.uniform(-s, s);
    layer->b = Tensor(1, out);  // zeros
    mlp.layers.push_back(std::move(layer));
  }
  return mlp;
}

ParamBinding::LayerNodes ParamBinding::bind(Tape& tape,
                                            const std::shared_ptr<LinearLayer>& layer) {
  auto it = nodes_.find(layer.get());
  if (it != nodes_.end()) return it->second;
  LayerNodes n;
  n.w = tape.leaf(layer->W);
  n.b = tape.leaf(layer->b);
  nodes_.emplace(layer.get(), n);
  return n;
}

const ParamBinding::LayerNodes* ParamBinding::find(const LinearLayer* layer) const {
  auto it = nodes_.find(layer);
  return it == nodes_.end() ? nullptr : &it->second;
}

NodeId mlp_forward(Tape& tape, const Mlp& mlp, NodeId x, ParamBinding& binding) {
  NodeId h = x;
  for (size_t i = 0; i < mlp.layers.size(); ++i) {
    auto n = binding.bind(tape, mlp.layers[i]);
    h = tape.add_bias(tape.matmul(h, n.w), n.b);
    if (i + 1 < mlp.layers.size()) h = tape.relu(h);
  }
  switch (mlp.out_act) {
    case OutAct::kNone:
      return h;
    case OutAct::kSoftmax:
      return tape.softmax_rows(h);
    case OutAct::kSigmoid:
      return tape.sigmoid(h);
  }
  throw std::logic_error("mlp_forward: unknown output activation");
}

Tensor mlp_forward_values(const Mlp& mlp, const Tensor& x) {
  // Evaluation path: same math as mlp_forward, no tape. Cheapest correct
  // implementation is to run a throwaway tape; model sizes here are tiny.
  Tape tape;
  ParamBinding binding;
  NodeId out = mlp_forward(tape, mlp, tape.leaf(x), binding);
  return tape.value(out);
}

}  // namespace mada
