// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "mada/tensor.hpp"

namespace mada {

// Index of a node on the tape. Every operation (including leaf creation)
// appends exactly one record and produces exactly one node, so NodeId is
// also the record index.
using NodeId = int;

enum class OpKind {
  kLeaf,
  kMatMul,
  kAddBias,
  kRelu,
  kSigmoid,
  kSoftmaxRows,
  kCrossEntropy,
  kBinaryCrossEntropy,
  kGradReverse,
  kScaleRows,
  kSliceRows,
  kSliceCols,
  kAdd,
};

struct TapeRecord {
  OpKind kind;
  NodeId a = -1;  // first input
  NodeId b = -1;  // second input (matmul rhs, bias, targets, weights, ...)
  NodeId c = -1;  // third input (binary_cross_entropy sample weights)
  double scalar = 0.0;        // grad_reverse lambda
  int i0 = 0, i1 = 0;         // slice range [i0, i1)
  bool flow_weights = false;  // scale_rows: propagate into the weight column
  std::vector<int> labels;    // cross_entropy class indices
};

// Define-by-run reverse-mode tape over Tensors. A fresh tape is built for
// every training step; backward() walks the records once in reverse.
class Tape {
 public:
  // Copies t onto the tape as a differentiable input.
  NodeId leaf(const Tensor& t);

  NodeId matmul(NodeId a, NodeId b);
  // x (n x c) plus bias row (1 x c) broadcast over the n rows.
  NodeId add_bias(NodeId x, NodeId bias);
  NodeId relu(NodeId x);
  // Elementwise logistic sigmoid.
  NodeId sigmoid(NodeId x);
  // Row-wise softmax with max subtraction.
  NodeId softmax_rows(NodeId x);
  // Mean over rows of -ln(probs[row, labels[row]]), probs clamped below at
  // kProbFloor. Scalar output.
  NodeId cross_entropy(NodeId probs, const std::vector<int>& labels);
  // (1/n) * sum_i w_i * -[t_i ln p_i + (1 - t_i) ln(1 - p_i)], p clamped to
  // [kProbFloor, 1 - kProbFloor]. All three arguments are (n x 1); gradients
  // flow into pred only. Scalar output.
  NodeId binary_cross_entropy(NodeId pred, NodeId targets, NodeId weights);
  // Identity forward; backward multiplies the upstream gradient by -lambda.
  NodeId grad_reverse(NodeId x, double lambda);
  // Row i of the output is weights[i] * row i of x. The weight column is
  // treated as a constant unless flow_weights is set (see the adversarial
  // loss construction for why the default stops there).
  NodeId scale_rows(NodeId x, NodeId weights, bool flow_weights = false);
  NodeId slice_rows(NodeId x, int r0, int r1);
  NodeId slice_cols(NodeId x, int c0, int c1);
  // Elementwise sum of two same-shape nodes (used to combine scalar losses).
  NodeId add(NodeId a, NodeId b);

  const Tensor& value(NodeId id) const { return vals_[static_cast<size_t>(id)]; }
  size_t size() const { return recs_.size(); }

  // Gradients of a scalar loss with respect to every node, indexed by
  // NodeId; entries for nodes the loss does not reach are empty (0x0).
  // Single reverse sweep, one visit per record.
  std::vector<Tensor> backward(NodeId loss) const;

  // Records visited during the most recent backward() (each reverse-sweep
  // step counts once, reached or not). Exposed for the linear-cost test.
  mutable size_t last_backward_visits = 0;

  static constexpr double kProbFloor = 1e-12;

 private:
  NodeId push(TapeRecord rec, Tensor value);
  const Tensor& val(NodeId id) const { return vals_[static_cast<size_t>(id)]; }

  std::vector<TapeRecord> recs_;
  std::vector<Tensor> vals_;
};

}  // namespace mada
