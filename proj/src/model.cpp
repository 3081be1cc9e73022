// SPDX-License-Identifier: Apache-2.0

#include "mada/model.hpp"

#include <stdexcept>
#include <unordered_set>

#include "mada/rng.hpp"

namespace mada {

std::string to_string(Algorithm a) {
  switch (a) {
    case Algorithm::kMada: return "mada";
    case Algorithm::kDann: return "dann";
    case Algorithm::kSourceOnly: return "source_only";
  }
  return "?";
}

std::string to_string(ShareMode m) {
  switch (m) {
    case ShareMode::kIndependent: return "independent";
    case ShareMode::kPartial: return "partial";
    case ShareMode::kFull: return "full";
  }
  return "?";
}

Algorithm algorithm_from_string(const std::string& s) {
  if (s == "mada") return Algorithm::kMada;
  if (s == "dann") return Algorithm::kDann;
  if (s == "source_only") return Algorithm::kSourceOnly;
  throw std::invalid_argument("unknown algorithm '" + s + "' (want mada|dann|source_only)");
}

ShareMode share_mode_from_string(const std::string& s) {
  if (s == "independent") return ShareMode::kIndependent;
  if (s == "partial") return ShareMode::kPartial;
  if (s == "full") return ShareMode::kFull;
  throw std::invalid_argument("unknown share_mode '" + s + "' (want independent|partial|full)");
}

namespace {

std::vector<int> disc_dims(const TrainConfig& cfg) {
  std::vector<int> dims;
  dims.push_back(cfg.bottleneck_dim);
  for (int h : cfg.disc_hidden) dims.push_back(h);
  dims.push_back(1);
  return dims;
}

}  // namespace

MadaModel build_model(const TrainConfig& cfg) {
  if (cfg.K < 1) throw std::invalid_argument("build_model: K must be >= 1");
  if (cfg.input_dim < 1 || cfg.bottleneck_dim < 1)
    throw std::invalid_argument("build_model: dimensions must be positive");

  // Sub-network seeds are drawn from one master stream so that a single
  // config seed pins every parameter.
  Rng master(cfg.seed);
  uint64_t feat_seed = master.next_u64();
  uint64_t label_seed = master.next_u64();

  MadaModel m;
  m.K = cfg.K;
  m.share_mode = cfg.share_mode;

  std::vector<int> feat_dims;
  feat_dims.push_back(cfg.input_dim);
  for (int h : cfg.feature_hidden) feat_dims.push_back(h);
  feat_dims.push_back(cfg.bottleneck_dim);
  m.feature_extractor = init_params(feat_dims, OutAct::kNone, feat_seed);
  m.label_predictor = init_params({cfg.bottleneck_dim, cfg.K}, OutAct::kSoftmax, label_seed);

  int n_disc = cfg.algorithm == Algorithm::kMada ? cfg.K
             : cfg.algorithm == Algorithm::kDann ? 1
                                                 : 0;
  for (int k = 0; k < n_disc; ++k) {
    uint64_t disc_seed = master.next_u64();
    if (k == 0) {
      m.discriminators.push_back(init_params(disc_dims(cfg), OutAct::kSigmoid, disc_seed));
      continue;
    }
    switch (cfg.share_mode) {
      case ShareMode::kFull:
        // Alias every layer of discriminator 0.
        m.discriminators.push_back(m.discriminators[0]);
        break;
      case ShareMode::kPartial: {
        Mlp d = init_params(disc_dims(cfg), OutAct::kSigmoid, disc_seed);
        d.layers[0] = m.discriminators[0].layers[0];
        m.discriminators.push_back(std::move(d));
        break;
      }
      case ShareMode::kIndependent:
        m.discriminators.push_back(init_params(disc_dims(cfg), OutAct::kSigmoid, disc_seed));
        break;
    }
  }
  return m;
}

std::vector<ParamGroup> param_groups(const MadaModel& model, double classifier_lr_mult) {
  std::vector<ParamGroup> groups;
  std::unordered_set<const LinearLayer*> seen;
  auto push = [&](const std::shared_ptr<LinearLayer>& layer, double mult) {
    if (seen.insert(layer.get()).second) groups.push_back({layer, mult});
  };
  for (const auto& l : model.feature_extractor.layers) push(l, 1.0);
  for (const auto& l : model.label_predictor.layers) push(l, classifier_lr_mult);
  for (const auto& d : model.discriminators)
    for (const auto& l : d.layers) push(l, classifier_lr_mult);
  return groups;
}

namespace {

void check_batch(const MadaModel& model, const Batch& batch) {
  if (batch.source_count < 1)
    throw std::invalid_argument("loss: batch needs at least one source row");
  if (batch.source_count + batch.target_count != batch.x.rows)
    throw std::invalid_argument("loss: source_count + target_count != rows");
  if (static_cast<int>(batch.class_labels.size()) != batch.source_count)
    throw std::invalid_argument("loss: class_labels must cover exactly the source rows");
  for (int y : batch.class_labels)
    if (y < 0 || y >= model.K)
      throw std::invalid_argument("loss: class label outside [0, K)");
}

// Shared skeleton: features, predictions and the source-row label loss.
struct CommonNodes {
  NodeId f = -1;     // bottleneck features, all rows
  NodeId yhat = -1;  // softmax class probabilities, all rows
  NodeId label_loss = -1;
};

CommonNodes forward_common(const MadaModel& model, const Batch& batch, Tape& tape,
                           ParamBinding& binding) {
  CommonNodes c;
  NodeId x = tape.leaf(batch.x);
  c.f = mlp_forward(tape, model.feature_extractor, x, binding);
  c.yhat = mlp_forward(tape, model.label_predictor, c.f, binding);
  NodeId src_probs = tape.slice_rows(c.yhat, 0, batch.source_count);
  c.label_loss = tape.cross_entropy(src_probs, batch.class_labels);
  return c;
}

}  // namespace

LossHandles mada_loss(const MadaModel& model, const Batch& batch, double lambda, Tape& tape,
                      ParamBinding& binding, bool yhat_flow_through,
                      const std::vector<Tensor>* frozen_attention) {
  check_batch(model, batch);
  if (static_cast<int>(model.discriminators.size()) != model.K)
    throw std::invalid_argument("mada_loss: model must carry K discriminators");
  if (frozen_attention && yhat_flow_through)
    throw std::invalid_argument("mada_loss: frozen attention contradicts flow-through");
  if (frozen_attention && static_cast<int>(frozen_attention->size()) != model.K)
    throw std::invalid_argument("mada_loss: frozen attention must hold K columns");

  CommonNodes c = forward_common(model, batch, tape, binding);
  NodeId fr = tape.grad_reverse(c.f, lambda);
  NodeId dom = tape.leaf(batch.domain_labels);
  NodeId ones = tape.leaf(full(batch.x.rows, 1, 1.0));

  // Discriminator k sees the reversed features scaled by the predicted
  // probability of class k. By default that probability is a constant in
  // the backward pass; with flow-through it is reversed as well, so the
  // label predictor stays on the minimization side of the saddle.
  NodeId total = c.label_loss;
  double domain_loss = 0.0;
  for (int k = 0; k < model.K; ++k) {
    NodeId wk = frozen_attention ? tape.leaf((*frozen_attention)[static_cast<size_t>(k)])
                                 : tape.slice_cols(c.yhat, k, k + 1);
    if (yhat_flow_through) wk = tape.grad_reverse(wk, lambda);
    NodeId din = tape.scale_rows(fr, wk, yhat_flow_through);
    NodeId dhat = mlp_forward(tape, model.discriminators[k], din, binding);
    NodeId ldk = tape.binary_cross_entropy(dhat, dom, ones);
    domain_loss += tape.value(ldk).at(0, 0);
    total = tape.add(total, ldk);
  }

  LossHandles h;
  h.loss = total;
  h.out.label_loss = tape.value(c.label_loss).at(0, 0);
  h.out.domain_loss = domain_loss;
  h.out.lambda_used = lambda;
  h.out.total_objective = h.out.label_loss - lambda * domain_loss;
  return h;
}

LossHandles dann_loss(const MadaModel& model, const Batch& batch, double lambda, Tape& tape,
                      ParamBinding& binding) {
  check_batch(model, batch);
  if (model.discriminators.size() != 1)
    throw std::invalid_argument("dann_loss: model must carry exactly one discriminator");

  CommonNodes c = forward_common(model, batch, tape, binding);
  NodeId fr = tape.grad_reverse(c.f, lambda);
  NodeId dom = tape.leaf(batch.domain_labels);
  NodeId ones = tape.leaf(full(batch.x.rows, 1, 1.0));
  NodeId dhat = mlp_forward(tape, model.discriminators[0], fr, binding);
  NodeId ld = tape.binary_cross_entropy(dhat, dom, ones);

  LossHandles h;
  h.loss = tape.add(c.label_loss, ld);
  h.out.label_loss = tape.value(c.label_loss).at(0, 0);
  h.out.domain_loss = tape.value(ld).at(0, 0);
  h.out.lambda_used = lambda;
  h.out.total_objective = h.out.label_loss - lambda * h.out.domain_loss;
  return h;
}

LossHandles source_only_loss(const MadaModel& model, const Batch& batch, Tape& tape,
                             ParamBinding& binding) {
  check_batch(model, batch);
  CommonNodes c = forward_common(model, batch, tape, binding);
  LossHandles h;
  h.loss = c.label_loss;
  h.out.label_loss = tape.value(c.label_loss).at(0, 0);
  h.out.domain_loss = 0.0;
  h.out.lambda_used = 0.0;
  h.out.total_objective = h.out.label_loss;
  return h;
}

Prediction predict(const MadaModel& model, const Tensor& x) {
  Prediction p;
  Tensor f = mlp_forward_values(model.feature_extractor, x);
  p.probs = mlp_forward_values(model.label_predictor, f);
  p.classes.resize(static_cast<size_t>(x.rows));
  for (int i = 0; i < p.probs.rows; ++i) {
    int best = 0;
    for (int j = 1; j < p.probs.cols; ++j)
      if (p.probs.at(i, j) > p.probs.at(i, best)) best = j;
    p.classes[static_cast<size_t>(i)] = best;
  }
  return p;
}

}  // namespace mada
