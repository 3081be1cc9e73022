// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "mada/model.hpp"

namespace mada {

struct GroupCheck {
  std::string name;
  double max_rel_error = 0.0;
};

struct GradCheckReport {
  std::vector<GroupCheck> groups;
  double max_rel_error = 0.0;
  bool pass = false;
};

// Full-graph finite-difference verification for the configured algorithm.
//
// Parameters are checked against the objective their side of the saddle
// point actually optimizes: feature extractor and label predictor against
// label_loss - lambda * domain_loss (the attention weights held at their
// base values, since the analytic gradient treats them as constants), the
// discriminators against the raw domain-loss sum. A random batch of
// cfg.batch_source + cfg.batch_target rows is drawn from data_seed.
GradCheckReport gradcheck_graph(const TrainConfig& cfg, uint64_t data_seed, double lambda,
                                double h, double tol);

}  // namespace mada
