// SPDX-License-Identifier: Apache-2.0

#include "mada/eval.hpp"

#include <cmath>
#include <stdexcept>

#include "mada/rng.hpp"

namespace mada {

double accuracy(const MadaModel& model, const Dataset& ds, const std::vector<int>& truth) {
  if (ds.rows() == 0) throw std::invalid_argument("accuracy: empty dataset");
  if (static_cast<int>(truth.size()) != ds.rows())
    throw std::invalid_argument("accuracy: truth length does not match dataset rows");
  Prediction p = predict(model, ds.features);
  int hits = 0;
  for (size_t i = 0; i < truth.size(); ++i)
    if (p.classes[i] == truth[i]) ++hits;
  return static_cast<double>(hits) / static_cast<double>(truth.size());
}

namespace {

double sigmoid_stable(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  double t = std::exp(z);
  return t / (1.0 + t);
}

}  // namespace

double proxy_a_distance(const Tensor& features_source, const Tensor& features_target,
                        const ProbeConfig& cfg) {
  if (features_source.rows == 0 || features_target.rows == 0)
    throw std::invalid_argument("proxy_a_distance: both domains need rows");
  if (features_source.cols != features_target.cols)
    throw std::invalid_argument("proxy_a_distance: feature dimensionality differs");
  if (cfg.train_fraction <= 0.0 || cfg.train_fraction >= 1.0)
    throw std::invalid_argument("proxy_a_distance: train_fraction must be in (0, 1)");

  int d = features_source.cols;

  // Stratified split. Each domain is permuted by a fresh generator seeded
  // the same way, so the split (and hence d_A) does not depend on which
  // argument is called source: swapping the domains flips the probe labels,
  // which from zero initial weights just negates the weight trajectory.
  struct Split {
    std::vector<int> train, test;
  };
  auto split_domain = [&](int n) {
    std::vector<int> idx(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) idx[static_cast<size_t>(i)] = i;
    Rng rng(cfg.seed);
    rng.shuffle(idx);
    int n_train = static_cast<int>(std::floor(cfg.train_fraction * n));
    // Keep at least one row on each side.
    n_train = std::max(1, std::min(n - 1, n_train));
    Split s;
    s.train.assign(idx.begin(), idx.begin() + n_train);
    s.test.assign(idx.begin() + n_train, idx.end());
    return s;
  };
  Split src = split_domain(features_source.rows);
  Split tgt = split_domain(features_target.rows);

  // Standardize with training-set statistics.
  std::vector<double> mean(static_cast<size_t>(d), 0.0), var(static_cast<size_t>(d), 0.0);
  int n_train = static_cast<int>(src.train.size() + tgt.train.size());
  for (int i : src.train)
    for (int j = 0; j < d; ++j) mean[static_cast<size_t>(j)] += features_source.at(i, j);
  for (int i : tgt.train)
    for (int j = 0; j < d; ++j) mean[static_cast<size_t>(j)] += features_target.at(i, j);
  for (double& m : mean) m /= n_train;
  for (int i : src.train)
    for (int j = 0; j < d; ++j) {
      double c = features_source.at(i, j) - mean[static_cast<size_t>(j)];
      var[static_cast<size_t>(j)] += c * c;
    }
  for (int i : tgt.train)
    for (int j = 0; j < d; ++j) {
      double c = features_target.at(i, j) - mean[static_cast<size_t>(j)];
      var[static_cast<size_t>(j)] += c * c;
    }
  std::vector<double> inv_std(static_cast<size_t>(d));
  for (int j = 0; j < d; ++j) {
    double s = std::sqrt(var[static_cast<size_t>(j)] / n_train);
    inv_std[static_cast<size_t>(j)] = s > 1e-12 ? 1.0 / s : 0.0;
  }
  auto standardized = [&](const Tensor& feat, int row, int col) {
    return (feat.at(row, col) - mean[static_cast<size_t>(col)]) * inv_std[static_cast<size_t>(col)];
  };

  // Linear logistic probe, full-batch gradient descent from zero weights.
  // Probe label: 1 for the first argument's rows, 0 for the second's.
  std::vector<double> w(static_cast<size_t>(d) + 1, 0.0);  // last entry is the bias
  auto logit = [&](const Tensor& feat, int row) {
    double z = w[static_cast<size_t>(d)];
    for (int j = 0; j < d; ++j) z += w[static_cast<size_t>(j)] * standardized(feat, row, j);
    return z;
  };
  std::vector<double> grad(static_cast<size_t>(d) + 1);
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::fill(grad.begin(), grad.end(), 0.0);
    for (int i : src.train) {
      double err = sigmoid_stable(logit(features_source, i)) - 1.0;
      for (int j = 0; j < d; ++j)
        grad[static_cast<size_t>(j)] += err * standardized(features_source, i, j);
      grad[static_cast<size_t>(d)] += err;
    }
    for (int i : tgt.train) {
      double err = sigmoid_stable(logit(features_target, i));
      for (int j = 0; j < d; ++j)
        grad[static_cast<size_t>(j)] += err * standardized(features_target, i, j);
      grad[static_cast<size_t>(d)] += err;
    }
    for (size_t j = 0; j < w.size(); ++j) w[j] -= cfg.learning_rate * grad[j] / n_train;
  }

  // Held-out domain-classification error.
  int wrong = 0;
  int n_test = static_cast<int>(src.test.size() + tgt.test.size());
  for (int i : src.test)
    if (logit(features_source, i) <= 0.0) ++wrong;
  for (int i : tgt.test)
    if (logit(features_target, i) > 0.0) ++wrong;
  double eps = static_cast<double>(wrong) / n_test;
  double da = 2.0 * (1.0 - 2.0 * eps);
  return da < 0.0 ? 0.0 : da;
}

void export_embeddings(const MadaModel& model, const Dataset& ds, const std::string& path) {
  Dataset emb;
  emb.features = mlp_forward_values(model.feature_extractor, ds.features);
  emb.labels = ds.labels;
  emb.domain = ds.domain;
  emb.class_count = ds.class_count;
  save_csv(path, emb);
}

}  // namespace mada
