// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>

#include "mada/model.hpp"

namespace mada {

// Text checkpoint, versioned. The header records the architecture
// (algorithm, sharing, dimensions); parameter values follow as %.17g text,
// one unique layer at a time in param_groups order, so aliased layers are
// stored once and the aliasing is reconstructed by build_model on load.
// %.17g round-trips doubles exactly, making save -> load the identity.
void save_checkpoint(const std::string& path, const TrainConfig& cfg, const MadaModel& model);

struct LoadedCheckpoint {
  TrainConfig cfg;  // architecture fields only; training knobs left at defaults
  MadaModel model;
};

LoadedCheckpoint load_checkpoint(const std::string& path);

}  // namespace mada
