// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <vector>

#include "mada/tensor.hpp"

namespace mada {

// Result of a finite-difference sweep: the largest relative error seen and
// where it occurred, for diagnostics.
struct GradCheckResult {
  double max_rel_error = 0.0;
  int worst_param = -1;
  int worst_entry = -1;
};

// Central-difference verification of analytic gradients.
//
// loss_fn recomputes the scalar loss from the current contents of params
// (the tensors are perturbed in place and restored). analytic[i] must hold
// the claimed gradient for *params[i]. The relative error denominator is
// max(|analytic|, |numeric|, 1e-8) so that near-zero pairs do not blow up.
GradCheckResult finite_diff_check(const std::function<double()>& loss_fn,
                                  const std::vector<Tensor*>& params,
                                  const std::vector<Tensor>& analytic, double h);

}  // namespace mada
