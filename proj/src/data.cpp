// SPDX-License-Identifier: Apache-2.0

#include "mada/data.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace mada {

double effective_rotation_deg(const SyntheticConfig& cfg) {
  if (!cfg.swap_prone) return cfg.rotation_deg;
  return 360.0 / cfg.class_count * cfg.swap_m + cfg.swap_epsilon_deg;
}

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;

struct Center {
  double x, y;
};

// Class k's mode centers before the domain transform. With one mode per
// class this is just the point on the main circle.
std::vector<Center> class_centers(const SyntheticConfig& cfg, int k) {
  double ang = 2.0 * kPi * k / cfg.class_count;
  Center main{cfg.circle_radius * std::cos(ang), cfg.circle_radius * std::sin(ang)};
  std::vector<Center> out;
  for (int m = 0; m < cfg.modes_per_class; ++m) {
    if (cfg.modes_per_class == 1 || cfg.mode_radius == 0.0) {
      out.push_back(main);
      continue;
    }
    double mang = 2.0 * kPi * m / cfg.modes_per_class;
    out.push_back({main.x + cfg.mode_radius * std::cos(mang),
                   main.y + cfg.mode_radius * std::sin(mang)});
  }
  return out;
}

Dataset sample_domain(const SyntheticConfig& cfg, DomainTag tag, bool rotate, uint64_t seed) {
  double th = rotate ? effective_rotation_deg(cfg) * kPi / 180.0 : 0.0;
  double c = std::cos(th), s = std::sin(th);
  double tx = rotate ? cfg.translate_x : 0.0;
  double ty = rotate ? cfg.translate_y : 0.0;

  Rng rng(seed);
  int n = cfg.class_count * cfg.samples_per_class;
  Dataset ds;
  ds.features = Tensor(n, cfg.dim);
  ds.labels.resize(static_cast<size_t>(n));
  ds.domain = tag;
  ds.class_count = cfg.class_count;

  int row = 0;
  for (int k = 0; k < cfg.class_count; ++k) {
    std::vector<Center> centers = class_centers(cfg, k);
    for (int i = 0; i < cfg.samples_per_class; ++i, ++row) {
      // Modes are visited round-robin so per-mode counts stay balanced.
      const Center& m = centers[static_cast<size_t>(i) % centers.size()];
      double px = m.x + cfg.noise_sigma * rng.gaussian();
      double py = m.y + cfg.noise_sigma * rng.gaussian();
      // The domain transform rotates the first two coordinates and then
      // translates; extra dimensions are independent noise in both domains.
      ds.features.at(row, 0) = c * px - s * py + tx;
      if (cfg.dim > 1) ds.features.at(row, 1) = s * px + c * py + ty;
      for (int d = 2; d < cfg.dim; ++d)
        ds.features.at(row, d) = cfg.noise_sigma * rng.gaussian();
      ds.labels[static_cast<size_t>(row)] = k;
    }
  }
  return ds;
}

}  // namespace

GeneratedData gen_multimode(const SyntheticConfig& cfg) {
  if (cfg.class_count < 2) throw std::invalid_argument("gen_multimode: class_count must be >= 2");
  if (cfg.samples_per_class < 1)
    throw std::invalid_argument("gen_multimode: samples_per_class must be >= 1");
  if (cfg.modes_per_class < 1)
    throw std::invalid_argument("gen_multimode: modes_per_class must be >= 1");
  if (cfg.dim < 2) throw std::invalid_argument("gen_multimode: dim must be >= 2");
  if (cfg.noise_sigma <= 0.0) throw std::invalid_argument("gen_multimode: noise_sigma must be > 0");
  if (cfg.swap_prone && cfg.swap_m < 1)
    throw std::invalid_argument("gen_multimode: swap_m must be >= 1");

  // Distinct substreams per domain so the two sample sets are independent.
  Rng master(cfg.seed);
  uint64_t src_seed = master.next_u64();
  uint64_t tgt_seed = master.next_u64();

  GeneratedData out;
  out.source = sample_domain(cfg, DomainTag::kSource, /*rotate=*/false, src_seed);
  out.target = sample_domain(cfg, DomainTag::kTarget, /*rotate=*/true, tgt_seed);
  out.target_truth = out.target.labels;
  for (int& l : out.target.labels) l = Dataset::kUnlabeled;
  return out;
}

void save_csv(const std::string& path, const Dataset& ds, const std::vector<int>* truth_override) {
  if (truth_override && truth_override->size() != ds.labels.size())
    throw std::invalid_argument("save_csv: truth override length mismatch");
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw std::runtime_error("save_csv: cannot open " + path);
  for (int d = 0; d < ds.features.cols; ++d) std::fprintf(f, "f%d,", d);
  std::fprintf(f, "label,domain\n");
  int dom = ds.domain == DomainTag::kSource ? 1 : 0;
  for (int i = 0; i < ds.rows(); ++i) {
    for (int d = 0; d < ds.features.cols; ++d)
      std::fprintf(f, "%.17g,", ds.features.at(i, d));
    int label = truth_override ? (*truth_override)[static_cast<size_t>(i)]
                               : ds.labels[static_cast<size_t>(i)];
    std::fprintf(f, "%d,%d\n", label, dom);
  }
  std::fclose(f);
}

Dataset load_csv(const std::string& path, int class_count) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_csv: cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("load_csv: empty file " + path);

  // Parse and validate the header.
  std::vector<std::string> cols;
  {
    std::stringstream ss(line);
    std::string tok;
    while (std::getline(ss, tok, ',')) cols.push_back(tok);
  }
  if (cols.size() < 3 || cols[cols.size() - 2] != "label" || cols.back() != "domain")
    throw std::runtime_error("load_csv: bad header in " + path +
                             " (want f0,..,f{d-1},label,domain)");
  int dim = static_cast<int>(cols.size()) - 2;
  for (int d = 0; d < dim; ++d)
    if (cols[static_cast<size_t>(d)] != "f" + std::to_string(d))
      throw std::runtime_error("load_csv: bad header column '" + cols[static_cast<size_t>(d)] +
                               "' in " + path);

  Dataset ds;
  ds.class_count = class_count;
  std::vector<double> values;
  std::vector<int> labels;
  int dom_seen = -1;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string tok;
    std::vector<std::string> toks;
    while (std::getline(ss, tok, ',')) toks.push_back(tok);
    if (static_cast<int>(toks.size()) != dim + 2)
      throw std::runtime_error("load_csv: " + path + ":" + std::to_string(lineno) + ": got " +
                               std::to_string(toks.size()) + " fields, want " +
                               std::to_string(dim + 2));
    try {
      size_t used = 0;
      for (int d = 0; d < dim; ++d) {
        values.push_back(std::stod(toks[static_cast<size_t>(d)], &used));
        if (used != toks[static_cast<size_t>(d)].size()) throw std::invalid_argument("trailing");
      }
      labels.push_back(std::stoi(toks[static_cast<size_t>(dim)]));
      int dom = std::stoi(toks[static_cast<size_t>(dim + 1)]);
      if (dom != 0 && dom != 1) throw std::invalid_argument("domain not 0/1");
      if (dom_seen == -1) dom_seen = dom;
      if (dom != dom_seen) throw std::invalid_argument("mixed domain values in one file");
    } catch (const std::exception& e) {
      throw std::runtime_error("load_csv: " + path + ":" + std::to_string(lineno) + ": " +
                               e.what());
    }
  }
  int n = static_cast<int>(labels.size());
  ds.features = Tensor(n, dim, std::move(values));
  ds.labels = std::move(labels);
  ds.domain = dom_seen == 0 ? DomainTag::kTarget : DomainTag::kSource;
  for (int l : ds.labels)
    if (l != Dataset::kUnlabeled && (l < 0 || l >= class_count))
      throw std::runtime_error("load_csv: label " + std::to_string(l) + " outside [0, " +
                               std::to_string(class_count) + ") in " + path);
  return ds;
}

Dataset drop_classes(const Dataset& ds, const std::set<int>& remove) {
  Dataset out;
  out.domain = ds.domain;
  out.class_count = ds.class_count;
  std::vector<int> keep;
  for (int i = 0; i < ds.rows(); ++i)
    if (!remove.count(ds.labels[static_cast<size_t>(i)])) keep.push_back(i);
  out.features = Tensor(static_cast<int>(keep.size()), ds.features.cols);
  out.labels.reserve(keep.size());
  for (size_t r = 0; r < keep.size(); ++r) {
    for (int d = 0; d < ds.features.cols; ++d)
      out.features.at(static_cast<int>(r), d) = ds.features.at(keep[r], d);
    out.labels.push_back(ds.labels[static_cast<size_t>(keep[r])]);
  }
  return out;
}

std::vector<int> drop_classes_truth(const std::vector<int>& truth, const std::set<int>& remove) {
  std::vector<int> out;
  for (int l : truth)
    if (!remove.count(l)) out.push_back(l);
  return out;
}

BatchStream::BatchStream(const Dataset& source, const Dataset& target, int batch_source,
                         int batch_target, uint64_t seed)
    : source_(source),
      target_(target),
      batch_source_(batch_source),
      batch_target_(batch_target),
      src_rng_(0),
      tgt_rng_(0) {
  if (batch_source < 1 || batch_target < 1)
    throw std::invalid_argument("BatchStream: batch sizes must be >= 1");
  if (source.rows() < 1 || target.rows() < 1)
    throw std::invalid_argument("BatchStream: empty dataset");
  if (source.features.cols != target.features.cols)
    throw std::invalid_argument("BatchStream: source and target dimensionality differ");
  Rng master(seed);
  src_rng_ = Rng(master.next_u64());
  tgt_rng_ = Rng(master.next_u64());
}

std::vector<int> BatchStream::take(std::vector<int>& order, size_t& pos, Rng& rng, int count) {
  std::vector<int> out;
  out.reserve(static_cast<size_t>(count));
  while (static_cast<int>(out.size()) < count) {
    if (pos >= order.size()) {
      // New epoch: fresh permutation of the row indices.
      rng.shuffle(order);
      pos = 0;
    }
    out.push_back(order[pos++]);
  }
  return out;
}

Batch BatchStream::next() {
  if (src_order_.empty()) {
    src_order_.resize(static_cast<size_t>(source_.rows()));
    for (int i = 0; i < source_.rows(); ++i) src_order_[static_cast<size_t>(i)] = i;
    src_rng_.shuffle(src_order_);
    src_pos_ = 0;
  }
  if (tgt_order_.empty()) {
    tgt_order_.resize(static_cast<size_t>(target_.rows()));
    for (int i = 0; i < target_.rows(); ++i) tgt_order_[static_cast<size_t>(i)] = i;
    tgt_rng_.shuffle(tgt_order_);
    tgt_pos_ = 0;
  }

  std::vector<int> src_rows = take(src_order_, src_pos_, src_rng_, batch_source_);
  std::vector<int> tgt_rows = take(tgt_order_, tgt_pos_, tgt_rng_, batch_target_);

  Batch b;
  b.source_count = batch_source_;
  b.target_count = batch_target_;
  b.x = Tensor(batch_source_ + batch_target_, source_.features.cols);
  b.domain_labels = Tensor(batch_source_ + batch_target_, 1);
  for (int i = 0; i < batch_source_; ++i) {
    int r = src_rows[static_cast<size_t>(i)];
    for (int d = 0; d < b.x.cols; ++d) b.x.at(i, d) = source_.features.at(r, d);
    b.class_labels.push_back(source_.labels[static_cast<size_t>(r)]);
    b.domain_labels.at(i, 0) = 1.0;
  }
  for (int i = 0; i < batch_target_; ++i) {
    int r = tgt_rows[static_cast<size_t>(i)];
    for (int d = 0; d < b.x.cols; ++d) b.x.at(batch_source_ + i, d) = target_.features.at(r, d);
    b.domain_labels.at(batch_source_ + i, 0) = 0.0;
  }
  return b;
}

}  // namespace mada
