// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mada/nn.hpp"
#include "mada/optimizer.hpp"
#include "mada/schedule.hpp"
#include "mada/tape.hpp"

namespace mada {

enum class Algorithm { kMada, kDann, kSourceOnly };
enum class ShareMode { kIndependent, kPartial, kFull };

std::string to_string(Algorithm a);
std::string to_string(ShareMode m);
Algorithm algorithm_from_string(const std::string& s);
ShareMode share_mode_from_string(const std::string& s);

// Everything a single training run needs to know. Defaults are the
// desk-scale configuration used by the bundled synthetic experiments.
struct TrainConfig {
  Algorithm algorithm = Algorithm::kMada;
  int K = 4;
  int input_dim = 2;
  std::vector<int> feature_hidden = {64};
  int bottleneck_dim = 16;
  std::vector<int> disc_hidden = {64, 64};
  ShareMode share_mode = ShareMode::kIndependent;
  int total_iterations = 4000;
  int batch_source = 64;
  int batch_target = 64;
  uint64_t seed = 1;
  LrSchedule lr;
  LambdaSchedule lam;
  double momentum = 0.9;
  // Applied to the label predictor and the discriminators; the feature
  // extractor always runs at 1x.
  double classifier_lr_mult = 10.0;
  // When true, domain-loss gradients flow through the class-probability
  // weights into the label predictor (with reversal, keeping it on the
  // minimization side). Off by default; kept as a comparison knob.
  bool yhat_flow_through = false;
  int eval_interval = 100;
  // Fit a domain probe on the bottleneck features at every metrics snapshot
  // that falls on the probe cadence (every 10% of training). Off by default;
  // it retrains a linear classifier each time and dominates the step cost.
  bool compute_a_distance = false;
};

// Feature extractor G_f, label predictor G_y and the K domain
// discriminators G_d^k. Sharing applies to the discriminators only:
//   independent: K disjoint parameter sets
//   partial:     first discriminator layer aliased across all K
//   full:        every discriminator layer aliased across all K
struct MadaModel {
  Mlp feature_extractor;
  Mlp label_predictor;
  std::vector<Mlp> discriminators;
  ShareMode share_mode = ShareMode::kIndependent;
  int K = 0;
};

// Deterministic in cfg.seed. The discriminator list length depends on the
// algorithm: K for mada, 1 for dann, 0 for source_only.
MadaModel build_model(const TrainConfig& cfg);

// Unique trainable layers in a stable order (feature extractor, label
// predictor, discriminators), with aliased layers listed once. lr_mult is 1
// for the feature extractor and classifier_lr_mult for the rest.
std::vector<ParamGroup> param_groups(const MadaModel& model, double classifier_lr_mult);

// One optimization step's worth of data. Source rows come first, then
// target rows; domain_labels is (n x 1) with 1 = source, 0 = target.
struct Batch {
  Tensor x;
  std::vector<int> class_labels;  // source rows only
  Tensor domain_labels;
  int source_count = 0;
  int target_count = 0;
};

struct StepOutput {
  double label_loss = 0.0;
  double domain_loss = 0.0;
  // label_loss - lambda * domain_loss: the objective as seen by the
  // feature extractor and label predictor (the minimization side).
  double total_objective = 0.0;
  double lambda_used = 0.0;
  double eta_used = 0.0;
};

// Scalar node to differentiate plus the reported losses. The node is
// label_loss + sum_k domain_loss_k; the gradient reversal buried in the
// graph makes one backward pass serve both sides of the saddle point
// (discriminators descend their loss, the feature extractor ascends it).
struct LossHandles {
  NodeId loss = -1;
  StepOutput out;
};

// MADA objective: cross-entropy over the source rows plus K binary domain
// losses, discriminator k seeing the features scaled by the predicted
// probability of class k. Requires model.discriminators.size() == K.
//
// frozen_attention, when given, supplies the K weight columns as plain
// constants instead of reading them from the live class probabilities. At
// the same parameters this changes neither values nor gradients (the live
// weights are already constants in the backward pass unless flow-through is
// on); the finite-difference harness uses it so that perturbing a parameter
// does not move the weights the analytic gradient treated as fixed.
LossHandles mada_loss(const MadaModel& model, const Batch& batch, double lambda, Tape& tape,
                      ParamBinding& binding, bool yhat_flow_through = false,
                      const std::vector<Tensor>* frozen_attention = nullptr);

// Single unweighted discriminator over all rows.
LossHandles dann_loss(const MadaModel& model, const Batch& batch, double lambda, Tape& tape,
                      ParamBinding& binding);

// Label loss only; domain_loss reported as 0.
LossHandles source_only_loss(const MadaModel& model, const Batch& batch, Tape& tape,
                             ParamBinding& binding);

struct Prediction {
  std::vector<int> classes;
  Tensor probs;
};

// Softmax probabilities and argmax classes; ties break toward the lowest
// class index.
Prediction predict(const MadaModel& model, const Tensor& x);

}  // namespace mada
