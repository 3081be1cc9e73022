// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "mada/model.hpp"
#include "mada/rng.hpp"
#include "mada/tensor.hpp"

namespace mada {

enum class DomainTag { kSource, kTarget };

// Feature matrix plus labels. Unlabeled rows (target training data) carry
// kUnlabeled; ground-truth target labels for evaluation travel outside the
// Dataset handed to training.
struct Dataset {
  static constexpr int kUnlabeled = -1;

  Tensor features;
  std::vector<int> labels;
  DomainTag domain = DomainTag::kSource;
  int class_count = 0;

  int rows() const { return features.rows; }
};

// Synthetic multimode generator configuration. Class centers sit equally
// spaced on a circle; each class may fan out into several modes on a small
// ring around its center. The target domain is the same layout pushed
// through a rotation plus translation, sampled independently.
struct SyntheticConfig {
  int class_count = 4;
  int modes_per_class = 1;
  int samples_per_class = 500;  // per domain
  int dim = 2;                  // extra dimensions beyond the first two are pure noise
  double circle_radius = 3.0;
  double mode_radius = 0.0;  // distance of a class's modes from its center
  double noise_sigma = 0.35;
  double rotation_deg = 0.0;
  double translate_x = 0.0;
  double translate_y = 0.0;
  // When set, overrides rotation_deg with (360/K) * swap_m + swap_epsilon_deg
  // so that the best global rigid alignment pairs every class with the next
  // one over, while per-class alignment stays easy.
  bool swap_prone = false;
  int swap_m = 1;
  double swap_epsilon_deg = 5.0;
  uint64_t seed = 1;
};

struct GeneratedData {
  Dataset source;          // fully labeled
  Dataset target;          // labels all kUnlabeled
  std::vector<int> target_truth;  // evaluation-only ground truth
};

// Deterministic in cfg.seed.
GeneratedData gen_multimode(const SyntheticConfig& cfg);

// The rotation actually used (accounts for swap_prone).
double effective_rotation_deg(const SyntheticConfig& cfg);

// CSV schema: header "f0,...,f{d-1},label,domain"; label -1 means
// unlabeled; domain 1 = source, 0 = target. Values printed with %.17g so a
// round trip is exact.
void save_csv(const std::string& path, const Dataset& ds,
              const std::vector<int>* truth_override = nullptr);
Dataset load_csv(const std::string& path, int class_count);

// Removes every row whose label is in `remove`. class_count is kept, so the
// label space still covers classes that no longer occur (the negative
// transfer setup drops target classes this way). Surviving rows are
// untouched and keep their order.
Dataset drop_classes(const Dataset& ds, const std::set<int>& remove);
std::vector<int> drop_classes_truth(const std::vector<int>& truth, const std::set<int>& remove);

// Balanced batch stream: every batch holds exactly batch_source source rows
// followed by batch_target target rows. Each domain cycles through its rows
// with an independent reshuffle per epoch. Deterministic in seed.
class BatchStream {
 public:
  BatchStream(const Dataset& source, const Dataset& target, int batch_source, int batch_target,
              uint64_t seed);

  Batch next();

 private:
  // Take `count` dataset row indices from one domain's shuffled cycle.
  static std::vector<int> take(std::vector<int>& order, size_t& pos, Rng& rng, int count);

  const Dataset& source_;
  const Dataset& target_;
  int batch_source_;
  int batch_target_;
  Rng src_rng_, tgt_rng_;  // independent per-domain shuffle streams
  std::vector<int> src_order_, tgt_order_;
  size_t src_pos_ = 0, tgt_pos_ = 0;
};

}  // namespace mada
