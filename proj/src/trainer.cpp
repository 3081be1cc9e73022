// SPDX-License-Identifier: Apache-2.0

#include "mada/trainer.hpp"

#include <cmath>

namespace mada {

namespace {

// Keeps the batch-shuffle stream decoupled from the parameter-init stream
// so adding a layer never perturbs the data order.
constexpr uint64_t kStreamSeedSalt = 0xB5297A4D0F605E2Bull;

LossHandles compute_loss(const TrainConfig& cfg, const MadaModel& model, const Batch& batch,
                         double lambda, Tape& tape, ParamBinding& binding) {
  switch (cfg.algorithm) {
    case Algorithm::kMada:
      return mada_loss(model, batch, lambda, tape, binding, cfg.yhat_flow_through);
    case Algorithm::kDann:
      return dann_loss(model, batch, lambda, tape, binding);
    case Algorithm::kSourceOnly:
      return source_only_loss(model, batch, tape, binding);
  }
  throw std::logic_error("compute_loss: unknown algorithm");
}

}  // namespace

TrainResult train(const TrainConfig& cfg, const ProbeConfig& probe, const Dataset& source,
                  const Dataset& target, const std::vector<int>* target_truth) {
  if (cfg.total_iterations < 1)
    throw std::invalid_argument("train: total_iterations must be >= 1");
  if (cfg.eval_interval < 1) throw std::invalid_argument("train: eval_interval must be >= 1");
  if (source.rows() == 0 || target.rows() == 0)
    throw std::invalid_argument("train: datasets must be nonempty");
  for (int l : source.labels)
    if (l < 0 || l >= cfg.K)
      throw std::invalid_argument("train: source label " + std::to_string(l) +
                                  " outside [0, K=" + std::to_string(cfg.K) + ")");
  if (target_truth && static_cast<int>(target_truth->size()) != target.rows())
    throw std::invalid_argument("train: target_truth length mismatch");

  TrainResult res;
  res.model = build_model(cfg);
  std::vector<ParamGroup> groups = param_groups(res.model, cfg.classifier_lr_mult);
  SgdMomentum opt(groups, cfg.momentum);
  BatchStream stream(source, target, cfg.batch_source, cfg.batch_target,
                     cfg.seed ^ kStreamSeedSalt);

  // d_A during training is sampled every 10% of the run.
  int adist_interval = std::max(1, cfg.total_iterations / 10);

  auto snapshot = [&](int t, double p, double eta, double lambda, const StepOutput& out) {
    Metrics m;
    m.iteration = t;
    m.p = p;
    m.eta = eta;
    m.lambda = lambda;
    m.label_loss = out.label_loss;
    m.domain_loss = out.domain_loss;
    m.source_accuracy = accuracy(res.model, source, source.labels);
    m.target_accuracy =
        target_truth ? accuracy(res.model, target, *target_truth) : -1.0;
    if (cfg.compute_a_distance && (t % adist_interval == 0 || t == cfg.total_iterations)) {
      Tensor fs = mlp_forward_values(res.model.feature_extractor, source.features);
      Tensor ft = mlp_forward_values(res.model.feature_extractor, target.features);
      m.a_distance = proxy_a_distance(fs, ft, probe);
      m.has_a_distance = true;
    }
    res.history.push_back(m);
  };

  for (int t = 0; t < cfg.total_iterations; ++t) {
    double p = static_cast<double>(t) / cfg.total_iterations;
    double eta = lr_at(cfg.lr, p);
    double lambda = lambda_at(cfg.lam, p);
    Batch batch = stream.next();

    Tape tape;
    ParamBinding binding;
    LossHandles h = compute_loss(cfg, res.model, batch, lambda, tape, binding);
    h.out.eta_used = eta;
    if (!std::isfinite(h.out.label_loss) || !std::isfinite(h.out.domain_loss))
      throw NanLossError(t, "non-finite loss at iteration " + std::to_string(t));

    if (t % cfg.eval_interval == 0) snapshot(t, p, eta, lambda, h.out);

    std::vector<Tensor> grads = tape.backward(h.loss);
    std::vector<Tensor> gw, gb;
    gw.reserve(groups.size());
    gb.reserve(groups.size());
    for (const auto& g : groups) {
      const ParamBinding::LayerNodes* nodes = binding.find(g.layer.get());
      if (!nodes) throw std::logic_error("train: parameter group missing from the tape");
      Tensor& wgrad = grads[static_cast<size_t>(nodes->w)];
      Tensor& bgrad = grads[static_cast<size_t>(nodes->b)];
      gw.push_back(wgrad.rows ? std::move(wgrad) : zeros_like(g.layer->W));
      gb.push_back(bgrad.rows ? std::move(bgrad) : zeros_like(g.layer->b));
    }
    opt.step(groups, gw, gb, eta);
  }

  // Closing record: the final parameters seen through a fresh batch.
  {
    Batch batch = stream.next();
    Tape tape;
    ParamBinding binding;
    double eta = lr_at(cfg.lr, 1.0);
    double lambda = lambda_at(cfg.lam, 1.0);
    LossHandles h = compute_loss(cfg, res.model, batch, lambda, tape, binding);
    snapshot(cfg.total_iterations, 1.0, eta, lambda, h.out);
  }
  return res;
}

}  // namespace mada
