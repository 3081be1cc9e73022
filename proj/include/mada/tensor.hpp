// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace mada {

// Dense 2-D double-precision matrix, row-major. The only value type the
// engine moves around: inputs, activations, parameters and gradients are
// all Tensors. Rows are samples.
struct Tensor {
  int rows = 0;
  int cols = 0;
  std::vector<double> v;  // rows * cols entries, row-major

  Tensor() = default;
  Tensor(int r, int c) : rows(r), cols(c), v(static_cast<size_t>(r) * c, 0.0) {
    if (r < 0 || c < 0) throw std::invalid_argument("Tensor: negative shape");
  }
  Tensor(int r, int c, std::vector<double> data) : rows(r), cols(c), v(std::move(data)) {
    if (v.size() != static_cast<size_t>(r) * c)
      throw std::invalid_argument("Tensor: data length " + std::to_string(v.size()) +
                                  " does not match " + std::to_string(r) + "x" + std::to_string(c));
  }

  double& at(int r, int c) { return v[static_cast<size_t>(r) * cols + c]; }
  double at(int r, int c) const { return v[static_cast<size_t>(r) * cols + c]; }

  size_t size() const { return v.size(); }
  bool same_shape(const Tensor& o) const { return rows == o.rows && cols == o.cols; }
  std::string shape_str() const { return std::to_string(rows) + "x" + std::to_string(cols); }
};

inline Tensor zeros_like(const Tensor& t) { return Tensor(t.rows, t.cols); }

inline Tensor full(int r, int c, double value) {
  Tensor t(r, c);
  for (auto& x : t.v) x = value;
  return t;
}

// Throws unless a and b have identical shape; `who` names the operation in
// the error message.
inline void require_same_shape(const Tensor& a, const Tensor& b, const char* who) {
  if (!a.same_shape(b))
    throw std::invalid_argument(std::string(who) + ": shape mismatch " + a.shape_str() +
                                " vs " + b.shape_str());
}

// c = a * b, plain triple loop. Also used by op backward passes with
// transposed arguments.
Tensor matmul_values(const Tensor& a, const Tensor& b);

Tensor transpose(const Tensor& t);

// a += b entrywise (gradient accumulation).
void add_inplace(Tensor& a, const Tensor& b);

bool all_finite(const Tensor& t);

}  // namespace mada
