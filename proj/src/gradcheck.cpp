// SPDX-License-Identifier: Apache-2.0

#include "mada/gradcheck.hpp"

#include <cmath>
#include <stdexcept>

namespace mada {

GradCheckResult finite_diff_check(const std::function<double()>& loss_fn,
                                  const std::vector<Tensor*>& params,
                                  const std::vector<Tensor>& analytic, double h) {
  if (h <= 0.0) throw std::invalid_argument("finite_diff_check: h must be positive");
  if (params.size() != analytic.size())
    throw std::invalid_argument("finite_diff_check: analytic gradient count mismatch");

  GradCheckResult res;
  for (size_t pi = 0; pi < params.size(); ++pi) {
    Tensor& p = *params[pi];
    require_same_shape(p, analytic[pi], "finite_diff_check");
    for (size_t e = 0; e < p.v.size(); ++e) {
      double saved = p.v[e];
      p.v[e] = saved + h;
      double up = loss_fn();
      p.v[e] = saved - h;
      double down = loss_fn();
      p.v[e] = saved;
      double numeric = (up - down) / (2.0 * h);
      double a = analytic[pi].v[e];
      double denom = std::max({std::fabs(a), std::fabs(numeric), 1e-8});
      double rel = std::fabs(a - numeric) / denom;
      if (rel > res.max_rel_error) {
        res.max_rel_error = rel;
        res.worst_param = static_cast<int>(pi);
        res.worst_entry = static_cast<int>(e);
      }
    }
  }
  return res;
}

}  // namespace mada
