// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <stdexcept>

namespace mada {

// Annealed learning rate eta_p = eta0 / (1 + alpha * p)^beta, with training
// progress p running from 0 to 1.
struct LrSchedule {
  double eta0 = 0.01;
  double alpha = 10.0;
  double beta = 0.75;
};

// Adversarial weight ramp lambda_p = lambda_max * (2 / (1 + exp(-delta * p)) - 1),
// 0 at the start of training and saturating toward lambda_max.
struct LambdaSchedule {
  double delta = 10.0;
  double lambda_max = 1.0;
};

inline double lr_at(const LrSchedule& s, double p) {
  if (p < 0.0 || p > 1.0) throw std::invalid_argument("lr_at: progress outside [0, 1]");
  return s.eta0 / std::pow(1.0 + s.alpha * p, s.beta);
}

inline double lambda_at(const LambdaSchedule& s, double p) {
  if (p < 0.0 || p > 1.0) throw std::invalid_argument("lambda_at: progress outside [0, 1]");
  return s.lambda_max * (2.0 / (1.0 + std::exp(-s.delta * p)) - 1.0);
}

}  // namespace mada
