// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <vector>

#include "mada/data.hpp"
#include "mada/eval.hpp"
#include "mada/model.hpp"

namespace mada {

// Raised when a step produces a non-finite loss; carries the iteration so
// the caller can log a diagnostic record and move on to the next seed.
struct NanLossError : std::runtime_error {
  NanLossError(int iteration_, const std::string& what_) : std::runtime_error(what_), iteration(iteration_) {}
  int iteration;
};

struct TrainResult {
  MadaModel model;
  std::vector<Metrics> history;
};

// Runs the configured algorithm for cfg.total_iterations steps. Metrics are
// recorded before the update at every eval_interval-th iteration and once
// more at iteration == total_iterations (a fresh forward pass, no update),
// so the series always ends with the final model's numbers.
//
// target_truth is evaluation-only (target_accuracy in the metrics); pass
// nullptr when unknown and the field is reported as -1.
// probe is used when cfg.compute_a_distance is set: d_A over the full
// source/target bottleneck features every 10% of training.
TrainResult train(const TrainConfig& cfg, const ProbeConfig& probe, const Dataset& source,
                  const Dataset& target, const std::vector<int>* target_truth);

}  // namespace mada
