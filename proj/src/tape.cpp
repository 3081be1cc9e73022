// SPDX-License-Identifier: Apache-2.0

#include "mada/tape.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace mada {

namespace {

double clamp_prob(double p) {
  if (p < Tape::kProbFloor) return Tape::kProbFloor;
  if (p > 1.0 - Tape::kProbFloor) return 1.0 - Tape::kProbFloor;
  return p;
}

}  // namespace

NodeId Tape::push(TapeRecord rec, Tensor value) {
  recs_.push_back(std::move(rec));
  vals_.push_back(std::move(value));
  return static_cast<NodeId>(recs_.size()) - 1;
}

NodeId Tape::leaf(const Tensor& t) {
  TapeRecord r;
  r.kind = OpKind::kLeaf;
  return push(std::move(r), t);
}

NodeId Tape::matmul(NodeId a, NodeId b) {
  Tensor out = matmul_values(val(a), val(b));  // shape check lives there
  TapeRecord r;
  r.kind = OpKind::kMatMul;
  r.a = a;
  r.b = b;
  return push(std::move(r), std::move(out));
}

NodeId Tape::add_bias(NodeId x, NodeId bias) {
  const Tensor& xv = val(x);
  const Tensor& bv = val(bias);
  if (bv.rows != 1 || bv.cols != xv.cols)
    throw std::invalid_argument("add_bias: bias " + bv.shape_str() + " for input " +
                                xv.shape_str());
  Tensor out = xv;
  for (int i = 0; i < out.rows; ++i)
    for (int j = 0; j < out.cols; ++j) out.at(i, j) += bv.at(0, j);
  TapeRecord r;
  r.kind = OpKind::kAddBias;
  r.a = x;
  r.b = bias;
  return push(std::move(r), std::move(out));
}

NodeId Tape::relu(NodeId x) {
  Tensor out = val(x);
  for (double& e : out.v) e = e > 0.0 ? e : 0.0;
  TapeRecord r;
  r.kind = OpKind::kRelu;
  r.a = x;
  return push(std::move(r), std::move(out));
}

NodeId Tape::sigmoid(NodeId x) {
  Tensor out = val(x);
  for (double& e : out.v) {
    // Stable in both tails: never exponentiates a large positive value.
    if (e >= 0.0) {
      e = 1.0 / (1.0 + std::exp(-e));
    } else {
      double t = std::exp(e);
      e = t / (1.0 + t);
    }
  }
  TapeRecord r;
  r.kind = OpKind::kSigmoid;
  r.a = x;
  return push(std::move(r), std::move(out));
}

NodeId Tape::softmax_rows(NodeId x) {
  const Tensor& xv = val(x);
  if (xv.cols < 1) throw std::invalid_argument("softmax_rows: zero columns");
  Tensor out(xv.rows, xv.cols);
  for (int i = 0; i < xv.rows; ++i) {
    double m = xv.at(i, 0);
    for (int j = 1; j < xv.cols; ++j) m = std::max(m, xv.at(i, j));
    double z = 0.0;
    for (int j = 0; j < xv.cols; ++j) {
      double e = std::exp(xv.at(i, j) - m);
      out.at(i, j) = e;
      z += e;
    }
    for (int j = 0; j < xv.cols; ++j) out.at(i, j) /= z;
  }
  TapeRecord r;
  r.kind = OpKind::kSoftmaxRows;
  r.a = x;
  return push(std::move(r), std::move(out));
}

NodeId Tape::cross_entropy(NodeId probs, const std::vector<int>& labels) {
  const Tensor& pv = val(probs);
  if (static_cast<int>(labels.size()) != pv.rows)
    throw std::invalid_argument("cross_entropy: " + std::to_string(labels.size()) +
                                " labels for " + std::to_string(pv.rows) + " rows");
  double acc = 0.0;
  for (int i = 0; i < pv.rows; ++i) {
    int y = labels[i];
    if (y < 0 || y >= pv.cols)
      throw std::out_of_range("cross_entropy: label " + std::to_string(y) + " at row " +
                              std::to_string(i) + " outside [0, " + std::to_string(pv.cols) + ")");
    double p = pv.at(i, y);
    acc += -std::log(p < kProbFloor ? kProbFloor : p);
  }
  Tensor out(1, 1);
  out.at(0, 0) = acc / pv.rows;
  TapeRecord r;
  r.kind = OpKind::kCrossEntropy;
  r.a = probs;
  r.labels = labels;
  return push(std::move(r), std::move(out));
}

NodeId Tape::binary_cross_entropy(NodeId pred, NodeId targets, NodeId weights) {
  const Tensor& pv = val(pred);
  const Tensor& tv = val(targets);
  const Tensor& wv = val(weights);
  if (pv.cols != 1 || tv.cols != 1 || wv.cols != 1 || pv.rows != tv.rows || pv.rows != wv.rows)
    throw std::invalid_argument("binary_cross_entropy: want matching (n x 1) tensors, got " +
                                pv.shape_str() + ", " + tv.shape_str() + ", " + wv.shape_str());
  double acc = 0.0;
  for (int i = 0; i < pv.rows; ++i) {
    double p = clamp_prob(pv.at(i, 0));
    double t = tv.at(i, 0);
    acc += wv.at(i, 0) * -(t * std::log(p) + (1.0 - t) * std::log(1.0 - p));
  }
  Tensor out(1, 1);
  out.at(0, 0) = acc / pv.rows;
  TapeRecord r;
  r.kind = OpKind::kBinaryCrossEntropy;
  r.a = pred;
  r.b = targets;
  r.c = weights;
  return push(std::move(r), std::move(out));
}

NodeId Tape::grad_reverse(NodeId x, double lambda) {
  if (lambda < 0.0) throw std::invalid_argument("grad_reverse: negative lambda");
  TapeRecord r;
  r.kind = OpKind::kGradReverse;
  r.a = x;
  r.scalar = lambda;
  return push(std::move(r), val(x));
}

NodeId Tape::scale_rows(NodeId x, NodeId weights, bool flow_weights) {
  const Tensor& xv = val(x);
  const Tensor& wv = val(weights);
  if (wv.cols != 1 || wv.rows != xv.rows)
    throw std::invalid_argument("scale_rows: weights " + wv.shape_str() + " for input " +
                                xv.shape_str());
  Tensor out = xv;
  for (int i = 0; i < out.rows; ++i) {
    double w = wv.at(i, 0);
    for (int j = 0; j < out.cols; ++j) out.at(i, j) *= w;
  }
  TapeRecord r;
  r.kind = OpKind::kScaleRows;
  r.a = x;
  r.b = weights;
  r.flow_weights = flow_weights;
  return push(std::move(r), std::move(out));
}

NodeId Tape::slice_rows(NodeId x, int r0, int r1) {
  const Tensor& xv = val(x);
  if (r0 < 0 || r1 > xv.rows || r0 >= r1)
    throw std::invalid_argument("slice_rows: range [" + std::to_string(r0) + ", " +
                                std::to_string(r1) + ") on " + xv.shape_str());
  Tensor out(r1 - r0, xv.cols);
  for (int i = r0; i < r1; ++i)
    for (int j = 0; j < xv.cols; ++j) out.at(i - r0, j) = xv.at(i, j);
  TapeRecord r;
  r.kind = OpKind::kSliceRows;
  r.a = x;
  r.i0 = r0;
  r.i1 = r1;
  return push(std::move(r), std::move(out));
}

NodeId Tape::slice_cols(NodeId x, int c0, int c1) {
  const Tensor& xv = val(x);
  if (c0 < 0 || c1 > xv.cols || c0 >= c1)
    throw std::invalid_argument("slice_cols: range [" + std::to_string(c0) + ", " +
                                std::to_string(c1) + ") on " + xv.shape_str());
  Tensor out(xv.rows, c1 - c0);
  for (int i = 0; i < xv.rows; ++i)
    for (int j = c0; j < c1; ++j) out.at(i, j - c0) = xv.at(i, j);
  TapeRecord r;
  r.kind = OpKind::kSliceCols;
  r.a = x;
  r.i0 = c0;
  r.i1 = c1;
  return push(std::move(r), std::move(out));
}

NodeId Tape::add(NodeId a, NodeId b) {
  Tensor out = val(a);
  require_same_shape(out, val(b), "add");
  const Tensor& bv = val(b);
  for (size_t i = 0; i < out.v.size(); ++i) out.v[i] += bv.v[i];
  TapeRecord r;
  r.kind = OpKind::kAdd;
  r.a = a;
  r.b = b;
  return push(std::move(r), std::move(out));
}

std::vector<Tensor> Tape::backward(NodeId loss) const {
  const Tensor& lv = val(loss);
  if (lv.rows != 1 || lv.cols != 1)
    throw std::logic_error("backward: loss node is " + lv.shape_str() + ", want scalar (1x1)");

  std::vector<Tensor> grads(recs_.size());
  auto grad_of = [&](NodeId id) -> Tensor& {
    Tensor& g = grads[static_cast<size_t>(id)];
    if (g.rows == 0 && g.cols == 0) g = zeros_like(val(id));
    return g;
  };
  grad_of(loss).at(0, 0) = 1.0;

  last_backward_visits = 0;
  for (NodeId id = static_cast<NodeId>(recs_.size()) - 1; id >= 0; --id) {
    ++last_backward_visits;
    const Tensor& g = grads[static_cast<size_t>(id)];
    if (g.rows == 0 && g.cols == 0) continue;  // loss does not reach this node
    const TapeRecord& rec = recs_[static_cast<size_t>(id)];
    switch (rec.kind) {
      case OpKind::kLeaf:
        break;
      case OpKind::kMatMul: {
        add_inplace(grad_of(rec.a), matmul_values(g, transpose(val(rec.b))));
        add_inplace(grad_of(rec.b), matmul_values(transpose(val(rec.a)), g));
        break;
      }
      case OpKind::kAddBias: {
        add_inplace(grad_of(rec.a), g);
        Tensor& gb = grad_of(rec.b);
        for (int i = 0; i < g.rows; ++i)
          for (int j = 0; j < g.cols; ++j) gb.at(0, j) += g.at(i, j);
        break;
      }
      case OpKind::kRelu: {
        const Tensor& xv = val(rec.a);
        Tensor& gx = grad_of(rec.a);
        // Subgradient at exactly 0 is 0, hence the strict comparison.
        for (size_t i = 0; i < xv.v.size(); ++i)
          if (xv.v[i] > 0.0) gx.v[i] += g.v[i];
        break;
      }
      case OpKind::kSigmoid: {
        const Tensor& y = val(id);
        Tensor& gx = grad_of(rec.a);
        for (size_t i = 0; i < y.v.size(); ++i) gx.v[i] += g.v[i] * y.v[i] * (1.0 - y.v[i]);
        break;
      }
      case OpKind::kSoftmaxRows: {
        const Tensor& y = val(id);
        Tensor& gx = grad_of(rec.a);
        for (int i = 0; i < y.rows; ++i) {
          double dot = 0.0;
          for (int j = 0; j < y.cols; ++j) dot += g.at(i, j) * y.at(i, j);
          for (int j = 0; j < y.cols; ++j) gx.at(i, j) += y.at(i, j) * (g.at(i, j) - dot);
        }
        break;
      }
      case OpKind::kCrossEntropy: {
        const Tensor& pv = val(rec.a);
        Tensor& gp = grad_of(rec.a);
        double go = g.at(0, 0) / pv.rows;
        for (int i = 0; i < pv.rows; ++i) {
          double p = pv.at(i, rec.labels[i]);
          // Inside the clamp region the loss is constant in p.
          if (p > kProbFloor) gp.at(i, rec.labels[i]) += -go / p;
        }
        break;
      }
      case OpKind::kBinaryCrossEntropy: {
        const Tensor& pv = val(rec.a);
        const Tensor& tv = val(rec.b);
        const Tensor& wv = val(rec.c);
        Tensor& gp = grad_of(rec.a);
        double go = g.at(0, 0) / pv.rows;
        for (int i = 0; i < pv.rows; ++i) {
          double p = pv.at(i, 0);
          if (p <= kProbFloor || p >= 1.0 - kProbFloor) continue;  // clamped flat
          double t = tv.at(i, 0);
          gp.at(i, 0) += go * wv.at(i, 0) * (-(t / p) + (1.0 - t) / (1.0 - p));
        }
        break;
      }
      case OpKind::kGradReverse: {
        Tensor& gx = grad_of(rec.a);
        for (size_t i = 0; i < gx.v.size(); ++i) gx.v[i] += -rec.scalar * g.v[i];
        break;
      }
      case OpKind::kScaleRows: {
        const Tensor& xv = val(rec.a);
        const Tensor& wv = val(rec.b);
        Tensor& gx = grad_of(rec.a);
        for (int i = 0; i < xv.rows; ++i) {
          double w = wv.at(i, 0);
          for (int j = 0; j < xv.cols; ++j) gx.at(i, j) += w * g.at(i, j);
        }
        if (rec.flow_weights) {
          Tensor& gw = grad_of(rec.b);
          for (int i = 0; i < xv.rows; ++i) {
            double acc = 0.0;
            for (int j = 0; j < xv.cols; ++j) acc += g.at(i, j) * xv.at(i, j);
            gw.at(i, 0) += acc;
          }
        }
        break;
      }
      case OpKind::kSliceRows: {
        Tensor& gx = grad_of(rec.a);
        for (int i = rec.i0; i < rec.i1; ++i)
          for (int j = 0; j < gx.cols; ++j) gx.at(i, j) += g.at(i - rec.i0, j);
        break;
      }
      case OpKind::kSliceCols: {
        Tensor& gx = grad_of(rec.a);
        for (int i = 0; i < gx.rows; ++i)
          for (int j = rec.i0; j < rec.i1; ++j) gx.at(i, j) += g.at(i, j - rec.i0);
        break;
      }
      case OpKind::kAdd: {
        add_inplace(grad_of(rec.a), g);
        add_inplace(grad_of(rec.b), g);
        break;
      }
    }
  }
  return grads;
}

}  // namespace mada
