// SPDX-License-Identifier: Apache-2.0

#include "mada/optimizer.hpp"

#include <stdexcept>

namespace mada {

SgdMomentum::SgdMomentum(const std::vector<ParamGroup>& groups, double momentum)
    : momentum_(momentum) {
  vel_w_.reserve(groups.size());
  vel_b_.reserve(groups.size());
  for (const auto& g : groups) {
    vel_w_.push_back(zeros_like(g.layer->W));
    vel_b_.push_back(zeros_like(g.layer->b));
  }
}

void SgdMomentum::step(const std::vector<ParamGroup>& groups, const std::vector<Tensor>& grads_w,
                       const std::vector<Tensor>& grads_b, double eta) {
  if (groups.size() != vel_w_.size() || grads_w.size() != groups.size() ||
      grads_b.size() != groups.size())
    throw std::invalid_argument("SgdMomentum::step: group/gradient count mismatch");
  for (size_t i = 0; i < groups.size(); ++i) {
    Tensor& W = groups[i].layer->W;
    Tensor& b = groups[i].layer->b;
    require_same_shape(vel_w_[i], grads_w[i], "SgdMomentum::step W");
    require_same_shape(vel_b_[i], grads_b[i], "SgdMomentum::step b");
    double scale = eta * groups[i].lr_mult;
    for (size_t e = 0; e < W.v.size(); ++e) {
      vel_w_[i].v[e] = momentum_ * vel_w_[i].v[e] + grads_w[i].v[e];
      W.v[e] -= scale * vel_w_[i].v[e];
    }
    for (size_t e = 0; e < b.v.size(); ++e) {
      vel_b_[i].v[e] = momentum_ * vel_b_[i].v[e] + grads_b[i].v[e];
      b.v[e] -= scale * vel_b_[i].v[e];
    }
  }
}

}  // namespace mada
