// SPDX-License-Identifier: Apache-2.0

#include "mada/verify.hpp"

#include <algorithm>
#include <functional>

#include "mada/gradcheck.hpp"
#include "mada/rng.hpp"

namespace mada {

namespace {

Batch random_batch(const TrainConfig& cfg, uint64_t data_seed) {
  Rng rng(data_seed);
  Batch b;
  b.source_count = cfg.batch_source;
  b.target_count = cfg.batch_target;
  int n = b.source_count + b.target_count;
  b.x = Tensor(n, cfg.input_dim);
  for (double& v : b.x.v) v = rng.gaussian();
  b.domain_labels = Tensor(n, 1);
  for (int i = 0; i < b.source_count; ++i) {
    b.class_labels.push_back(i % cfg.K);
    b.domain_labels.at(i, 0) = 1.0;
  }
  return b;
}

}  // namespace

GradCheckReport gradcheck_graph(const TrainConfig& cfg, uint64_t data_seed, double lambda,
                                double h, double tol) {
  MadaModel model = build_model(cfg);
  Batch batch = random_batch(cfg, data_seed);

  // Attention weights captured at the base parameters; see mada_loss.
  std::vector<Tensor> frozen;
  if (cfg.algorithm == Algorithm::kMada && !cfg.yhat_flow_through) {
    Tensor f = mlp_forward_values(model.feature_extractor, batch.x);
    Tensor yhat = mlp_forward_values(model.label_predictor, f);
    for (int k = 0; k < cfg.K; ++k) {
      Tensor col(yhat.rows, 1);
      for (int i = 0; i < yhat.rows; ++i) col.at(i, 0) = yhat.at(i, k);
      frozen.push_back(std::move(col));
    }
  }

  auto build = [&](Tape& tape, ParamBinding& binding) -> LossHandles {
    switch (cfg.algorithm) {
      case Algorithm::kMada:
        return mada_loss(model, batch, lambda, tape, binding, cfg.yhat_flow_through,
                         cfg.yhat_flow_through ? nullptr : &frozen);
      case Algorithm::kDann:
        return dann_loss(model, batch, lambda, tape, binding);
      case Algorithm::kSourceOnly:
        return source_only_loss(model, batch, tape, binding);
    }
    throw std::logic_error("gradcheck_graph: unknown algorithm");
  };

  // Analytic gradients once, at the base point.
  Tape tape;
  ParamBinding binding;
  LossHandles handles = build(tape, binding);
  std::vector<Tensor> grads = tape.backward(handles.loss);

  auto analytic_of = [&](const std::shared_ptr<LinearLayer>& layer) {
    const ParamBinding::LayerNodes* nodes = binding.find(layer.get());
    if (!nodes) throw std::logic_error("gradcheck_graph: layer missing from tape");
    std::pair<Tensor, Tensor> wb;
    const Tensor& gw = grads[static_cast<size_t>(nodes->w)];
    const Tensor& gb = grads[static_cast<size_t>(nodes->b)];
    wb.first = gw.rows ? gw : zeros_like(layer->W);
    wb.second = gb.rows ? gb : zeros_like(layer->b);
    return wb;
  };

  auto min_side = [&]() {
    Tape t;
    ParamBinding pb;
    return build(t, pb).out.total_objective;
  };
  auto max_side = [&]() {
    Tape t;
    ParamBinding pb;
    return build(t, pb).out.domain_loss;
  };

  GradCheckReport report;
  auto check_group = [&](const std::string& name, const std::vector<std::shared_ptr<LinearLayer>>& layers,
                         const std::function<double()>& objective) {
    std::vector<Tensor*> params;
    std::vector<Tensor> analytic;
    for (const auto& l : layers) {
      auto wb = analytic_of(l);
      params.push_back(&l->W);
      analytic.push_back(std::move(wb.first));
      params.push_back(&l->b);
      analytic.push_back(std::move(wb.second));
    }
    GradCheckResult r = finite_diff_check(objective, params, analytic, h);
    report.groups.push_back({name, r.max_rel_error});
    report.max_rel_error = std::max(report.max_rel_error, r.max_rel_error);
  };

  check_group("feature_extractor", model.feature_extractor.layers, min_side);
  check_group("label_predictor", model.label_predictor.layers, min_side);
  for (size_t k = 0; k < model.discriminators.size(); ++k) {
    // Under full sharing every discriminator holds the same layers; check
    // the aliased set once.
    if (k > 0 && model.share_mode == ShareMode::kFull) break;
    check_group("discriminator_" + std::to_string(k), model.discriminators[k].layers, max_side);
  }

  report.pass = report.max_rel_error <= tol;
  return report;
}

}  // namespace mada
