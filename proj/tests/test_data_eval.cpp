// SPDX-License-Identifier: Apache-2.0
//
// Synthetic data generator, CSV I/O, batch streaming, and the evaluation
// helpers (accuracy, proxy A-distance, embedding export).

#include <doctest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <string>
#include <vector>

#include "mada/data.hpp"
#include "mada/eval.hpp"
#include "mada/model.hpp"
#include "mada/nn.hpp"
#include "mada/rng.hpp"

using namespace mada;

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;

std::string tmp_path(const std::string& name) { return "/tmp/mada_test_" + name; }

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  REQUIRE(out.good());
  out << text;
}

bool tensors_equal(const Tensor& a, const Tensor& b) {
  if (a.rows != b.rows || a.cols != b.cols) return false;
  for (size_t i = 0; i < a.v.size(); ++i)
    if (a.v[i] != b.v[i]) return false;
  return true;
}

// Index of the dataset row whose features match `x` row `r` exactly.
// Gaussian draws make collisions impossible in practice.
int find_row(const Tensor& features, const Tensor& x, int r) {
  for (int i = 0; i < features.rows; ++i) {
    bool same = true;
    for (int d = 0; d < features.cols; ++d)
      if (features.at(i, d) != x.at(r, d)) {
        same = false;
        break;
      }
    if (same) return i;
  }
  return -1;
}

// Per-class per-coordinate sample means of the first two feature columns.
std::vector<std::array<double, 2>> class_means(const Tensor& features,
                                               const std::vector<int>& labels, int class_count) {
  std::vector<std::array<double, 2>> mean(static_cast<size_t>(class_count), {0.0, 0.0});
  std::vector<int> count(static_cast<size_t>(class_count), 0);
  for (int i = 0; i < features.rows; ++i) {
    int k = labels[static_cast<size_t>(i)];
    mean[static_cast<size_t>(k)][0] += features.at(i, 0);
    mean[static_cast<size_t>(k)][1] += features.at(i, 1);
    ++count[static_cast<size_t>(k)];
  }
  for (int k = 0; k < class_count; ++k) {
    REQUIRE(count[static_cast<size_t>(k)] > 0);
    mean[static_cast<size_t>(k)][0] /= count[static_cast<size_t>(k)];
    mean[static_cast<size_t>(k)][1] /= count[static_cast<size_t>(k)];
  }
  return mean;
}

}  // namespace

TEST_CASE("generator layout and determinism") {
  SyntheticConfig cfg;
  cfg.class_count = 4;
  cfg.samples_per_class = 25;
  cfg.dim = 3;
  cfg.seed = 42;
  GeneratedData gen = gen_multimode(cfg);

  CHECK(gen.source.rows() == 100);
  CHECK(gen.target.rows() == 100);
  CHECK(gen.source.features.cols == 3);
  CHECK(gen.source.class_count == 4);
  CHECK(gen.target.class_count == 4);
  CHECK(gen.source.domain == DomainTag::kSource);
  CHECK(gen.target.domain == DomainTag::kTarget);

  // Source rows come in label order, 25 per class; target rows hide their
  // labels but the truth vector keeps the same layout.
  for (int i = 0; i < 100; ++i) {
    CHECK(gen.source.labels[static_cast<size_t>(i)] == i / 25);
    CHECK(gen.target.labels[static_cast<size_t>(i)] == Dataset::kUnlabeled);
    CHECK(gen.target_truth[static_cast<size_t>(i)] == i / 25);
  }

  // Identical config, identical draw; a different seed changes the data;
  // the two domains never share samples even without a transform.
  GeneratedData again = gen_multimode(cfg);
  CHECK(tensors_equal(again.source.features, gen.source.features));
  CHECK(tensors_equal(again.target.features, gen.target.features));
  cfg.seed = 43;
  GeneratedData other = gen_multimode(cfg);
  CHECK_FALSE(tensors_equal(other.source.features, gen.source.features));
  CHECK_FALSE(tensors_equal(gen.source.features, gen.target.features));

  SyntheticConfig bad = cfg;
  bad.class_count = 1;
  CHECK_THROWS_AS(gen_multimode(bad), std::invalid_argument);
  bad = cfg;
  bad.samples_per_class = 0;
  CHECK_THROWS_AS(gen_multimode(bad), std::invalid_argument);
  bad = cfg;
  bad.dim = 1;
  CHECK_THROWS_AS(gen_multimode(bad), std::invalid_argument);
  bad = cfg;
  bad.noise_sigma = 0.0;
  CHECK_THROWS_AS(gen_multimode(bad), std::invalid_argument);
  bad = cfg;
  bad.modes_per_class = 0;
  CHECK_THROWS_AS(gen_multimode(bad), std::invalid_argument);
}

TEST_CASE("class sample means converge to the configured centers") {
  // With sigma = 0.3 and 1000 draws per class the standard error of each
  // coordinate mean is about 0.0095, so a 0.05 band is over five standard
  // errors wide. One straggler seed out of twenty is still tolerated.
  SyntheticConfig cfg;
  cfg.class_count = 4;
  cfg.samples_per_class = 1000;
  cfg.noise_sigma = 0.3;

  int bad_seeds = 0;
  for (uint64_t seed = 1; seed <= 20; ++seed) {
    cfg.seed = seed;
    GeneratedData gen = gen_multimode(cfg);
    auto src_means = class_means(gen.source.features, gen.source.labels, 4);
    auto tgt_means = class_means(gen.target.features, gen.target_truth, 4);
    bool ok = true;
    for (int k = 0; k < 4; ++k) {
      double cx = cfg.circle_radius * std::cos(2.0 * kPi * k / 4);
      double cy = cfg.circle_radius * std::sin(2.0 * kPi * k / 4);
      ok = ok && std::abs(src_means[static_cast<size_t>(k)][0] - cx) < 0.05;
      ok = ok && std::abs(src_means[static_cast<size_t>(k)][1] - cy) < 0.05;
      // No rotation or translation configured, so the target sits on the
      // same centers, sampled independently.
      ok = ok && std::abs(tgt_means[static_cast<size_t>(k)][0] - cx) < 0.05;
      ok = ok && std::abs(tgt_means[static_cast<size_t>(k)][1] - cy) < 0.05;
    }
    if (!ok) ++bad_seeds;
  }
  CHECK(bad_seeds <= 1);
}

TEST_CASE("rotation and translation move the target centers as configured") {
  SyntheticConfig cfg;
  cfg.class_count = 4;
  cfg.samples_per_class = 2000;
  cfg.noise_sigma = 0.35;
  cfg.rotation_deg = 90.0;
  cfg.translate_x = 1.5;
  cfg.translate_y = -0.5;
  cfg.seed = 7;
  GeneratedData gen = gen_multimode(cfg);

  auto tgt_means = class_means(gen.target.features, gen.target_truth, 4);
  for (int k = 0; k < 4; ++k) {
    double cx = cfg.circle_radius * std::cos(2.0 * kPi * k / 4);
    double cy = cfg.circle_radius * std::sin(2.0 * kPi * k / 4);
    // Rotate by 90 degrees, then translate: (x, y) -> (-y + tx, x + ty).
    double ex = -cy + cfg.translate_x;
    double ey = cx + cfg.translate_y;
    CHECK(std::abs(tgt_means[static_cast<size_t>(k)][0] - ex) < 0.05);
    CHECK(std::abs(tgt_means[static_cast<size_t>(k)][1] - ey) < 0.05);
  }

  // A 90 degree rotation with no translation parks target class 0 on the
  // source class 1 center: the classic label-swap hazard.
  cfg.translate_x = 0.0;
  cfg.translate_y = 0.0;
  gen = gen_multimode(cfg);
  tgt_means = class_means(gen.target.features, gen.target_truth, 4);
  CHECK(std::abs(tgt_means[0][0] - 0.0) < 0.05);
  CHECK(std::abs(tgt_means[0][1] - 3.0) < 0.05);
}

TEST_CASE("swap-prone override picks the class-swapping rotation") {
  SyntheticConfig cfg;
  cfg.class_count = 4;
  cfg.swap_prone = true;
  CHECK(effective_rotation_deg(cfg) == doctest::Approx(95.0).epsilon(1e-15));
  cfg.swap_m = 2;
  CHECK(effective_rotation_deg(cfg) == doctest::Approx(185.0).epsilon(1e-15));
  cfg.class_count = 8;
  cfg.swap_m = 1;
  CHECK(effective_rotation_deg(cfg) == doctest::Approx(50.0).epsilon(1e-15));
  cfg.swap_prone = false;
  cfg.rotation_deg = 33.25;
  CHECK(effective_rotation_deg(cfg) == 33.25);

  // swap_prone is just a rotation override: generating with it on matches
  // generating with the equivalent explicit angle bit for bit.
  SyntheticConfig swap;
  swap.class_count = 4;
  swap.samples_per_class = 10;
  swap.swap_prone = true;
  swap.seed = 5;
  SyntheticConfig plain = swap;
  plain.swap_prone = false;
  plain.rotation_deg = 95.0;
  GeneratedData a = gen_multimode(swap);
  GeneratedData b = gen_multimode(plain);
  CHECK(tensors_equal(a.source.features, b.source.features));
  CHECK(tensors_equal(a.target.features, b.target.features));

  swap.swap_m = 0;
  CHECK_THROWS_AS(gen_multimode(swap), std::invalid_argument);
}

TEST_CASE("csv round trip is exact") {
  SyntheticConfig cfg;
  cfg.class_count = 3;
  cfg.samples_per_class = 7;
  cfg.dim = 4;
  cfg.seed = 19;
  GeneratedData gen = gen_multimode(cfg);

  // Stress the %.17g printing with values that need all the digits.
  gen.source.features.at(0, 0) = 1.0 / 3.0;
  gen.source.features.at(0, 1) = -2.2250738585072014e-308;  // smallest normal
  gen.source.features.at(0, 2) = 1.7976931348623157e308;    // largest finite
  gen.source.features.at(0, 3) = -0.1;

  std::string src_path = tmp_path("roundtrip_src.csv");
  save_csv(src_path, gen.source);
  Dataset src = load_csv(src_path, 3);
  CHECK(tensors_equal(src.features, gen.source.features));
  CHECK(src.labels == gen.source.labels);
  CHECK(src.domain == DomainTag::kSource);
  CHECK(src.class_count == 3);

  // Unlabeled target round trip.
  std::string tgt_path = tmp_path("roundtrip_tgt.csv");
  save_csv(tgt_path, gen.target);
  Dataset tgt = load_csv(tgt_path, 3);
  CHECK(tensors_equal(tgt.features, gen.target.features));
  CHECK(tgt.domain == DomainTag::kTarget);
  CHECK(std::all_of(tgt.labels.begin(), tgt.labels.end(),
                    [](int l) { return l == Dataset::kUnlabeled; }));

  // Truth override writes the evaluation labels instead.
  std::string truth_path = tmp_path("roundtrip_truth.csv");
  save_csv(truth_path, gen.target, &gen.target_truth);
  Dataset truth = load_csv(truth_path, 3);
  CHECK(truth.labels == gen.target_truth);
  CHECK(tensors_equal(truth.features, gen.target.features));

  std::vector<int> short_truth(static_cast<size_t>(gen.target.rows() - 1), 0);
  CHECK_THROWS_AS(save_csv(truth_path, gen.target, &short_truth), std::invalid_argument);

  std::remove(src_path.c_str());
  std::remove(tgt_path.c_str());
  std::remove(truth_path.c_str());
}

TEST_CASE("csv loader rejects malformed files") {
  std::string path = tmp_path("malformed.csv");

  CHECK_THROWS_WITH_AS(load_csv(tmp_path("does_not_exist.csv"), 2),
                       doctest::Contains("cannot open"), std::runtime_error);

  write_file(path, "");
  CHECK_THROWS_WITH_AS(load_csv(path, 2), doctest::Contains("empty file"), std::runtime_error);

  write_file(path, "x0,x1,label,domain\n0,0,0,1\n");
  CHECK_THROWS_WITH_AS(load_csv(path, 2), doctest::Contains("bad header column"),
                       std::runtime_error);

  write_file(path, "f0,f1,label\n0,0,0\n");
  CHECK_THROWS_WITH_AS(load_csv(path, 2), doctest::Contains("bad header"), std::runtime_error);

  // Wrong field count reports the 1-based line number (header is line 1).
  write_file(path, "f0,f1,label,domain\n0.5,0.5,0,1\n0.5,0.5,0\n");
  CHECK_THROWS_WITH_AS(load_csv(path, 2), doctest::Contains(":3: got 3 fields, want 4"),
                       std::runtime_error);

  write_file(path, "f0,f1,label,domain\n0.5,0.5abc,0,1\n");
  CHECK_THROWS_WITH_AS(load_csv(path, 2), doctest::Contains(":2:"), std::runtime_error);

  write_file(path, "f0,f1,label,domain\n0.5,0.5,0,2\n");
  CHECK_THROWS_WITH_AS(load_csv(path, 2), doctest::Contains("domain not 0/1"), std::runtime_error);

  write_file(path, "f0,f1,label,domain\n0.5,0.5,0,1\n0.5,0.5,0,0\n");
  CHECK_THROWS_WITH_AS(load_csv(path, 2), doctest::Contains("mixed domain"), std::runtime_error);

  write_file(path, "f0,f1,label,domain\n0.5,0.5,2,1\n");
  CHECK_THROWS_WITH_AS(load_csv(path, 2), doctest::Contains("outside [0, 2)"), std::runtime_error);

  // Blank lines are skipped, label -1 passes the range check.
  write_file(path, "f0,f1,label,domain\n0.5,0.25,-1,0\n\n1.5,1.25,-1,0\n");
  Dataset ds = load_csv(path, 2);
  CHECK(ds.rows() == 2);
  CHECK(ds.features.at(1, 1) == 1.25);
  CHECK(ds.domain == DomainTag::kTarget);

  std::remove(path.c_str());
}

TEST_CASE("drop_classes filters rows and keeps the label space") {
  SyntheticConfig cfg;
  cfg.class_count = 4;
  cfg.samples_per_class = 5;
  cfg.seed = 3;
  GeneratedData gen = gen_multimode(cfg);

  Dataset kept = drop_classes(gen.source, {1, 3});
  CHECK(kept.rows() == 10);
  CHECK(kept.class_count == 4);  // label space unchanged
  CHECK(kept.domain == DomainTag::kSource);

  // Survivors keep their order and their exact feature rows.
  int out_row = 0;
  for (int i = 0; i < gen.source.rows(); ++i) {
    int l = gen.source.labels[static_cast<size_t>(i)];
    if (l == 1 || l == 3) continue;
    CHECK(kept.labels[static_cast<size_t>(out_row)] == l);
    for (int d = 0; d < gen.source.features.cols; ++d)
      CHECK(kept.features.at(out_row, d) == gen.source.features.at(i, d));
    ++out_row;
  }
  CHECK(out_row == kept.rows());

  // Empty removal set is the identity; removing everything empties the set
  // but keeps the feature dimensionality.
  Dataset same = drop_classes(gen.source, {});
  CHECK(tensors_equal(same.features, gen.source.features));
  CHECK(same.labels == gen.source.labels);
  Dataset none = drop_classes(gen.source, {0, 1, 2, 3});
  CHECK(none.rows() == 0);
  CHECK(none.features.cols == gen.source.features.cols);

  // The truth-vector variant makes the same keep/drop decisions.
  std::vector<int> truth_kept = drop_classes_truth(gen.target_truth, {1, 3});
  CHECK(truth_kept.size() == 10);
  for (int l : truth_kept) CHECK((l == 0 || l == 2));
  CHECK(drop_classes_truth(gen.target_truth, {}) == gen.target_truth);
}

TEST_CASE("batch stream partitions each domain into epochs") {
  SyntheticConfig cfg;
  cfg.class_count = 2;
  cfg.samples_per_class = 6;  // 12 rows per domain
  cfg.seed = 21;
  GeneratedData gen = gen_multimode(cfg);

  BatchStream stream(gen.source, gen.target, 4, 6, 99);
  std::vector<int> src_seen, tgt_seen;
  for (int b = 0; b < 6; ++b) {
    Batch batch = stream.next();
    CHECK(batch.source_count == 4);
    CHECK(batch.target_count == 6);
    CHECK(batch.x.rows == 10);
    CHECK(batch.x.cols == 2);
    CHECK(batch.class_labels.size() == 4);
    CHECK(batch.domain_labels.rows == 10);
    for (int i = 0; i < 10; ++i)
      CHECK(batch.domain_labels.at(i, 0) == (i < 4 ? 1.0 : 0.0));
    for (int i = 0; i < 4; ++i) {
      int row = find_row(gen.source.features, batch.x, i);
      REQUIRE(row >= 0);
      // Labels travel with their rows.
      CHECK(batch.class_labels[static_cast<size_t>(i)] ==
            gen.source.labels[static_cast<size_t>(row)]);
      src_seen.push_back(row);
    }
    for (int i = 4; i < 10; ++i) {
      int row = find_row(gen.target.features, batch.x, i);
      REQUIRE(row >= 0);
      tgt_seen.push_back(row);
    }
  }

  // Six batches drain the 12-row source twice (4 x 6 = 24 draws) and the
  // target three times (6 x 6 = 36 draws): every row appears exactly
  // epoch-many times, and each epoch's slice is a permutation.
  for (int epoch = 0; epoch < 2; ++epoch) {
    std::vector<int> slice(src_seen.begin() + epoch * 12, src_seen.begin() + (epoch + 1) * 12);
    std::sort(slice.begin(), slice.end());
    for (int i = 0; i < 12; ++i) CHECK(slice[static_cast<size_t>(i)] == i);
  }
  for (int epoch = 0; epoch < 3; ++epoch) {
    std::vector<int> slice(tgt_seen.begin() + epoch * 12, tgt_seen.begin() + (epoch + 1) * 12);
    std::sort(slice.begin(), slice.end());
    for (int i = 0; i < 12; ++i) CHECK(slice[static_cast<size_t>(i)] == i);
  }

  CHECK_THROWS_AS(BatchStream(gen.source, gen.target, 0, 4, 1), std::invalid_argument);
  CHECK_THROWS_AS(BatchStream(gen.source, gen.target, 4, 0, 1), std::invalid_argument);
  Dataset empty;
  empty.features = Tensor(0, 2);
  CHECK_THROWS_AS(BatchStream(empty, gen.target, 4, 4, 1), std::invalid_argument);
  SyntheticConfig wide = cfg;
  wide.dim = 3;
  GeneratedData gen3 = gen_multimode(wide);
  CHECK_THROWS_AS(BatchStream(gen.source, gen3.target, 4, 4, 1), std::invalid_argument);
}

TEST_CASE("batch stream is deterministic in its seed") {
  SyntheticConfig cfg;
  cfg.class_count = 3;
  cfg.samples_per_class = 8;
  cfg.seed = 11;
  GeneratedData gen = gen_multimode(cfg);

  BatchStream a(gen.source, gen.target, 5, 3, 77);
  BatchStream b(gen.source, gen.target, 5, 3, 77);
  BatchStream c(gen.source, gen.target, 5, 3, 78);
  bool differs = false;
  for (int i = 0; i < 10; ++i) {
    Batch ba = a.next(), bb = b.next(), bc = c.next();
    CHECK(tensors_equal(ba.x, bb.x));
    CHECK(ba.class_labels == bb.class_labels);
    CHECK(tensors_equal(ba.domain_labels, bb.domain_labels));
    if (!tensors_equal(ba.x, bc.x)) differs = true;
  }
  CHECK(differs);
}

TEST_CASE("accuracy counts argmax matches") {
  TrainConfig cfg;
  cfg.algorithm = Algorithm::kSourceOnly;
  cfg.K = 3;
  cfg.input_dim = 2;
  cfg.feature_hidden = {5};
  cfg.bottleneck_dim = 4;
  cfg.seed = 13;
  MadaModel model = build_model(cfg);

  SyntheticConfig data;
  data.class_count = 3;
  data.samples_per_class = 4;
  data.seed = 2;
  GeneratedData gen = gen_multimode(data);

  Prediction pred = predict(model, gen.source.features);
  REQUIRE(pred.classes.size() == 12);

  // Truth equal to the model's own argmax scores 1.0; shifting every truth
  // label misses everywhere; flipping the first three rows scores 0.75.
  CHECK(accuracy(model, gen.source, pred.classes) == 1.0);
  std::vector<int> shifted = pred.classes;
  for (int& l : shifted) l = (l + 1) % 3;
  CHECK(accuracy(model, gen.source, shifted) == 0.0);
  std::vector<int> mixed = pred.classes;
  for (int i = 0; i < 3; ++i) mixed[static_cast<size_t>(i)] = (mixed[static_cast<size_t>(i)] + 1) % 3;
  CHECK(accuracy(model, gen.source, mixed) == 0.75);

  // Row order does not matter as long as truth rides along.
  Dataset shuffled = gen.source;
  std::vector<int> truth = pred.classes;
  std::vector<int> perm(12);
  for (int i = 0; i < 12; ++i) perm[static_cast<size_t>(i)] = i;
  Rng rng(5);
  rng.shuffle(perm);
  for (int i = 0; i < 12; ++i) {
    int from = perm[static_cast<size_t>(i)];
    for (int d = 0; d < 2; ++d) shuffled.features.at(i, d) = gen.source.features.at(from, d);
    truth[static_cast<size_t>(i)] = pred.classes[static_cast<size_t>(from)];
  }
  CHECK(accuracy(model, shuffled, truth) == 1.0);

  Dataset empty;
  empty.features = Tensor(0, 2);
  CHECK_THROWS_AS(accuracy(model, empty, {}), std::invalid_argument);
  std::vector<int> short_truth(11, 0);
  CHECK_THROWS_AS(accuracy(model, gen.source, short_truth), std::invalid_argument);
}

TEST_CASE("proxy a-distance: zero for identical sets, near two for separated sets") {
  ProbeConfig probe;

  // Identical feature sets: the stratified split picks the same rows on
  // both sides, so each held-out row is misclassified in exactly one of its
  // two appearances and the error is 0.5 regardless of the probe weights.
  Rng rng(31);
  Tensor same(200, 4);
  for (double& v : same.v) v = rng.gaussian();
  CHECK(proxy_a_distance(same, same, probe) == 0.0);

  // Two tight clouds ten units apart are trivially separable.
  Tensor left(200, 2), right(200, 2);
  for (int i = 0; i < 200; ++i)
    for (int j = 0; j < 2; ++j) {
      left.at(i, j) = -5.0 + 0.2 * rng.gaussian();
      right.at(i, j) = 5.0 + 0.2 * rng.gaussian();
    }
  CHECK(proxy_a_distance(left, right, probe) >= 1.9);

  CHECK_THROWS_AS(proxy_a_distance(Tensor(0, 2), right, probe), std::invalid_argument);
  CHECK_THROWS_AS(proxy_a_distance(same, right, probe), std::invalid_argument);
  ProbeConfig bad = probe;
  bad.train_fraction = 1.0;
  CHECK_THROWS_AS(proxy_a_distance(left, right, bad), std::invalid_argument);
}

TEST_CASE("proxy a-distance: symmetry, clamping, determinism") {
  ProbeConfig probe;
  Rng rng(17);

  // Overlapping clouds: the raw statistic would go negative whenever the
  // probe does worse than chance on the held-out rows, so the clamp keeps
  // every report in [0, 2]. Result is a pure function of its inputs.
  for (int rep = 0; rep < 5; ++rep) {
    Tensor a(60, 3), b(60, 3);
    for (double& v : a.v) v = rng.gaussian();
    for (double& v : b.v) v = rng.gaussian();
    double d = proxy_a_distance(a, b, probe);
    CHECK(d >= 0.0);
    CHECK(d <= 2.0);
    CHECK(proxy_a_distance(a, b, probe) == d);
  }

  // Moderate overlap: swapping the arguments flips the probe labels and
  // (from zero weights) negates the trajectory, so the statistic is
  // symmetric up to held-out rows sitting within float noise of the
  // boundary.
  Tensor u(300, 2), v(300, 2);
  for (int i = 0; i < 300; ++i)
    for (int j = 0; j < 2; ++j) {
      u.at(i, j) = -1.0 + rng.gaussian();
      v.at(i, j) = 1.0 + rng.gaussian();
    }
  double duv = proxy_a_distance(u, v, probe);
  double dvu = proxy_a_distance(v, u, probe);
  CHECK(std::abs(duv - dvu) <= 0.1);
  CHECK(duv > 0.0);
  CHECK(duv < 2.0);
}

TEST_CASE("export embeddings writes loadable bottleneck features") {
  TrainConfig cfg;
  cfg.algorithm = Algorithm::kMada;
  cfg.K = 3;
  cfg.input_dim = 3;
  cfg.feature_hidden = {5};
  cfg.bottleneck_dim = 4;
  cfg.disc_hidden = {4};
  cfg.seed = 11;
  MadaModel model = build_model(cfg);

  SyntheticConfig data;
  data.class_count = 3;
  data.samples_per_class = 5;
  data.dim = 3;
  data.seed = 5;
  GeneratedData gen = gen_multimode(data);

  std::string path = tmp_path("embeddings.csv");
  export_embeddings(model, gen.source, path);
  Dataset emb = load_csv(path, 3);
  CHECK(emb.rows() == 15);
  CHECK(emb.features.cols == 4);
  CHECK(emb.labels == gen.source.labels);
  CHECK(emb.domain == DomainTag::kSource);
  CHECK(tensors_equal(emb.features, mlp_forward_values(model.feature_extractor,
                                                       gen.source.features)));

  // Unlabeled target rows stay unlabeled in the export.
  export_embeddings(model, gen.target, path);
  Dataset temb = load_csv(path, 3);
  CHECK(temb.domain == DomainTag::kTarget);
  CHECK(std::all_of(temb.labels.begin(), temb.labels.end(),
                    [](int l) { return l == Dataset::kUnlabeled; }));

  std::remove(path.c_str());
}
