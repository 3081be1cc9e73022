// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mada/data.hpp"
#include "mada/model.hpp"

namespace mada {

// One evaluation record; serialized as a JSON line by the CLI.
struct Metrics {
  int iteration = 0;
  double p = 0.0;
  double eta = 0.0;
  double lambda = 0.0;
  double label_loss = 0.0;
  double domain_loss = 0.0;
  double target_accuracy = 0.0;
  double source_accuracy = 0.0;
  bool has_a_distance = false;
  double a_distance = 0.0;
};

// Domain-membership probe settings for the proxy A-distance.
struct ProbeConfig {
  double train_fraction = 0.8;
  int epochs = 500;
  double learning_rate = 0.5;
  uint64_t seed = 0;
};

// Fraction of rows whose predicted class matches truth.
double accuracy(const MadaModel& model, const Dataset& ds, const std::vector<int>& truth);

// Proxy A-distance d_A = max(0, 2 * (1 - 2 * eps)) where eps is the held-out
// error of a linear logistic probe trained to tell the two feature sets
// apart. Standardized inputs, full-batch gradient descent from zero weights;
// the split is stratified by domain. Deterministic in cfg.seed, and
// symmetric in the two arguments by construction (each domain's permutation
// depends only on the seed and that domain's row count).
double proxy_a_distance(const Tensor& features_source, const Tensor& features_target,
                        const ProbeConfig& cfg);

// Bottleneck activations of ds written as CSV (same schema as the data
// module, with bottleneck_dim feature columns).
void export_embeddings(const MadaModel& model, const Dataset& ds, const std::string& path);

}  // namespace mada
