// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "mada/data.hpp"
#include "mada/eval.hpp"
#include "mada/model.hpp"

namespace mada {

// A problem with the config file or command usage, as opposed to a failure
// during computation. The CLI maps this to exit code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Everything one invocation needs: training hyperparameters, the data
// source (synthetic generator or CSV paths), probe settings, output
// location and the repetition seeds.
struct RunConfig {
  TrainConfig train;
  ProbeConfig probe;
  std::optional<SyntheticConfig> synthetic;
  std::string source_csv;
  std::string target_csv;
  std::string target_truth_csv;
  std::set<int> drop_target_classes;  // removed from the target domain only
  std::string out_dir = "runs/out";
  std::vector<uint64_t> seeds = {1};
};

// Parses the JSON config. Every field has a default, so a minimal file
// names only the algorithm and a data block. Unknown keys are rejected.
RunConfig load_run_config(const std::string& path);

// Built-in configuration for the gradient check: the full adversarial graph
// at toy size (K=3, 2-D input, 2+2 batch rows).
TrainConfig gradcheck_default_config();

}  // namespace mada
