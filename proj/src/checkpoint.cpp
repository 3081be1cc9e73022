// SPDX-License-Identifier: Apache-2.0

#include "mada/checkpoint.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace mada {

namespace {

constexpr const char* kMagic = "mada-checkpoint-v1";

}  // namespace

void save_checkpoint(const std::string& path, const TrainConfig& cfg, const MadaModel& model) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw std::runtime_error("save_checkpoint: cannot open " + path);
  std::fprintf(f, "%s\n", kMagic);
  std::fprintf(f, "algorithm %s\n", to_string(cfg.algorithm).c_str());
  std::fprintf(f, "share_mode %s\n", to_string(cfg.share_mode).c_str());
  std::fprintf(f, "K %d\n", cfg.K);
  std::fprintf(f, "input_dim %d\n", cfg.input_dim);
  std::fprintf(f, "bottleneck_dim %d\n", cfg.bottleneck_dim);
  std::fprintf(f, "feature_hidden %zu", cfg.feature_hidden.size());
  for (int h : cfg.feature_hidden) std::fprintf(f, " %d", h);
  std::fprintf(f, "\ndisc_hidden %zu", cfg.disc_hidden.size());
  for (int h : cfg.disc_hidden) std::fprintf(f, " %d", h);

  std::vector<ParamGroup> groups = param_groups(model, 1.0);
  std::fprintf(f, "\nlayers %zu\n", groups.size());
  for (const auto& g : groups) {
    const LinearLayer& l = *g.layer;
    std::fprintf(f, "layer %d %d\n", l.in_dim(), l.out_dim());
    for (int i = 0; i < l.W.rows; ++i) {
      for (int j = 0; j < l.W.cols; ++j)
        std::fprintf(f, j ? " %.17g" : "%.17g", l.W.at(i, j));
      std::fprintf(f, "\n");
    }
    for (int j = 0; j < l.b.cols; ++j) std::fprintf(f, j ? " %.17g" : "%.17g", l.b.at(0, j));
    std::fprintf(f, "\n");
  }
  std::fclose(f);
}

namespace {

void expect_key(std::istream& in, const std::string& key) {
  std::string got;
  if (!(in >> got) || got != key)
    throw std::runtime_error("load_checkpoint: expected '" + key + "', got '" + got + "'");
}

std::vector<int> read_dims(std::istream& in, const std::string& key) {
  expect_key(in, key);
  size_t n = 0;
  if (!(in >> n)) throw std::runtime_error("load_checkpoint: bad count for " + key);
  std::vector<int> dims(n);
  for (size_t i = 0; i < n; ++i)
    if (!(in >> dims[i])) throw std::runtime_error("load_checkpoint: bad entry in " + key);
  return dims;
}

}  // namespace

LoadedCheckpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_checkpoint: cannot open " + path);
  std::string magic;
  std::getline(in, magic);
  if (magic != kMagic)
    throw std::runtime_error("load_checkpoint: " + path + " is not a checkpoint (bad header)");

  LoadedCheckpoint out;
  std::string word;
  expect_key(in, "algorithm");
  in >> word;
  out.cfg.algorithm = algorithm_from_string(word);
  expect_key(in, "share_mode");
  in >> word;
  out.cfg.share_mode = share_mode_from_string(word);
  expect_key(in, "K");
  in >> out.cfg.K;
  expect_key(in, "input_dim");
  in >> out.cfg.input_dim;
  expect_key(in, "bottleneck_dim");
  in >> out.cfg.bottleneck_dim;
  out.cfg.feature_hidden = read_dims(in, "feature_hidden");
  out.cfg.disc_hidden = read_dims(in, "disc_hidden");
  if (!in) throw std::runtime_error("load_checkpoint: truncated header in " + path);

  out.model = build_model(out.cfg);
  std::vector<ParamGroup> groups = param_groups(out.model, 1.0);

  expect_key(in, "layers");
  size_t n_layers = 0;
  in >> n_layers;
  if (n_layers != groups.size())
    throw std::runtime_error("load_checkpoint: " + path + " holds " + std::to_string(n_layers) +
                             " layers, architecture wants " + std::to_string(groups.size()));
  for (auto& g : groups) {
    expect_key(in, "layer");
    int rin = 0, rout = 0;
    in >> rin >> rout;
    if (rin != g.layer->in_dim() || rout != g.layer->out_dim())
      throw std::runtime_error("load_checkpoint: layer shape " + std::to_string(rin) + "x" +
                               std::to_string(rout) + " does not match architecture " +
                               g.layer->W.shape_str());
    for (double& v : g.layer->W.v)
      if (!(in >> v)) throw std::runtime_error("load_checkpoint: truncated weights in " + path);
    for (double& v : g.layer->b.v)
      if (!(in >> v)) throw std::runtime_error("load_checkpoint: truncated bias in " + path);
  }
  return out;
}

}  // namespace mada
