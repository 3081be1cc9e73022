// SPDX-License-Identifier: Apache-2.0

#include "mada/tensor.hpp"

#include <cmath>

namespace mada {

Tensor matmul_values(const Tensor& a, const Tensor& b) {
  if (a.cols != b.rows)
    throw std::invalid_argument("matmul: inner dimensions disagree, " + a.shape_str() +
                                " x " + b.shape_str());
  Tensor c(a.rows, b.cols);
  for (int i = 0; i < a.rows; ++i) {
    for (int k = 0; k < a.cols; ++k) {
      double aik = a.at(i, k);
      for (int j = 0; j < b.cols; ++j) c.at(i, j) += aik * b.at(k, j);
    }
  }
  return c;
}

Tensor transpose(const Tensor& t) {
  Tensor r(t.cols, t.rows);
  for (int i = 0; i < t.rows; ++i)
    for (int j = 0; j < t.cols; ++j) r.at(j, i) = t.at(i, j);
  return r;
}

void add_inplace(Tensor& a, const Tensor& b) {
  require_same_shape(a, b, "add_inplace");
  for (size_t i = 0; i < a.v.size(); ++i) a.v[i] += b.v[i];
}

bool all_finite(const Tensor& t) {
  for (double x : t.v)
    if (!std::isfinite(x)) return false;
  return true;
}

}  // namespace mada
