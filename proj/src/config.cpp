// SPDX-License-Identifier: Apache-2.0

#include "mada/config.hpp"

#include <fstream>

#include <json.hpp>

namespace mada {

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::string& where,
                    std::initializer_list<const char*> known) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool ok = false;
    for (const char* k : known)
      if (it.key() == k) ok = true;
    if (!ok) throw ConfigError("config: unknown key '" + it.key() + "' in " + where);
  }
}

template <typename T>
void read_into(const json& obj, const char* key, T& out) {
  if (!obj.contains(key)) return;
  try {
    out = obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError("config: bad value for '" + std::string(key) + "': " + e.what());
  }
}

void parse_train(const json& t, TrainConfig& cfg) {
  reject_unknown(t, "train",
                 {"K", "input_dim", "feature_hidden", "bottleneck_dim", "disc_hidden",
                  "share_mode", "total_iterations", "batch_source", "batch_target", "lr",
                  "lambda", "momentum", "classifier_lr_mult", "yhat_flow_through",
                  "compute_a_distance", "eval_interval"});
  read_into(t, "K", cfg.K);
  read_into(t, "input_dim", cfg.input_dim);
  read_into(t, "feature_hidden", cfg.feature_hidden);
  read_into(t, "bottleneck_dim", cfg.bottleneck_dim);
  read_into(t, "disc_hidden", cfg.disc_hidden);
  if (t.contains("share_mode")) cfg.share_mode = share_mode_from_string(t.at("share_mode"));
  read_into(t, "total_iterations", cfg.total_iterations);
  read_into(t, "batch_source", cfg.batch_source);
  read_into(t, "batch_target", cfg.batch_target);
  if (t.contains("lr")) {
    const json& lr = t.at("lr");
    reject_unknown(lr, "train.lr", {"eta0", "alpha", "beta"});
    read_into(lr, "eta0", cfg.lr.eta0);
    read_into(lr, "alpha", cfg.lr.alpha);
    read_into(lr, "beta", cfg.lr.beta);
  }
  if (t.contains("lambda")) {
    const json& lam = t.at("lambda");
    reject_unknown(lam, "train.lambda", {"delta", "lambda_max"});
    read_into(lam, "delta", cfg.lam.delta);
    read_into(lam, "lambda_max", cfg.lam.lambda_max);
  }
  read_into(t, "momentum", cfg.momentum);
  read_into(t, "classifier_lr_mult", cfg.classifier_lr_mult);
  read_into(t, "yhat_flow_through", cfg.yhat_flow_through);
  read_into(t, "compute_a_distance", cfg.compute_a_distance);
  read_into(t, "eval_interval", cfg.eval_interval);
}

void parse_synthetic(const json& s, SyntheticConfig& cfg) {
  reject_unknown(s, "data.synthetic",
                 {"class_count", "modes_per_class", "samples_per_class", "dim", "circle_radius",
                  "mode_radius", "noise_sigma", "rotation_deg", "translate_x", "translate_y",
                  "swap_prone", "swap_m", "swap_epsilon_deg", "seed"});
  read_into(s, "class_count", cfg.class_count);
  read_into(s, "modes_per_class", cfg.modes_per_class);
  read_into(s, "samples_per_class", cfg.samples_per_class);
  read_into(s, "dim", cfg.dim);
  read_into(s, "circle_radius", cfg.circle_radius);
  read_into(s, "mode_radius", cfg.mode_radius);
  read_into(s, "noise_sigma", cfg.noise_sigma);
  read_into(s, "rotation_deg", cfg.rotation_deg);
  read_into(s, "translate_x", cfg.translate_x);
  read_into(s, "translate_y", cfg.translate_y);
  read_into(s, "swap_prone", cfg.swap_prone);
  read_into(s, "swap_m", cfg.swap_m);
  read_into(s, "swap_epsilon_deg", cfg.swap_epsilon_deg);
  read_into(s, "seed", cfg.seed);
}

}  // namespace

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw ConfigError("config: " + path + " is not valid JSON: " + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config: top level must be an object");
  reject_unknown(doc, "top level",
                 {"algorithm", "train", "data", "probe", "out_dir", "seeds",
                  "drop_target_classes"});

  RunConfig rc;
  if (!doc.contains("algorithm")) throw ConfigError("config: missing 'algorithm'");
  try {
    rc.train.algorithm = algorithm_from_string(doc.at("algorithm"));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }

  if (doc.contains("train")) parse_train(doc.at("train"), rc.train);

  if (!doc.contains("data")) throw ConfigError("config: missing 'data' block");
  const json& data = doc.at("data");
  reject_unknown(data, "data", {"synthetic", "source_csv", "target_csv", "target_truth_csv"});
  if (data.contains("synthetic")) {
    SyntheticConfig sc;
    parse_synthetic(data.at("synthetic"), sc);
    rc.synthetic = sc;
    if (data.contains("source_csv") || data.contains("target_csv"))
      throw ConfigError("config: data block must be synthetic or CSV paths, not both");
    // The training dims follow the generator unless the config pins them.
    if (!doc.contains("train") || !doc.at("train").contains("K")) rc.train.K = sc.class_count;
    if (!doc.contains("train") || !doc.at("train").contains("input_dim"))
      rc.train.input_dim = sc.dim;
    if (rc.train.K != sc.class_count)
      throw ConfigError("config: train.K disagrees with data.synthetic.class_count");
    if (rc.train.input_dim != sc.dim)
      throw ConfigError("config: train.input_dim disagrees with data.synthetic.dim");
  } else {
    read_into(data, "source_csv", rc.source_csv);
    read_into(data, "target_csv", rc.target_csv);
    read_into(data, "target_truth_csv", rc.target_truth_csv);
    if (rc.source_csv.empty() || rc.target_csv.empty())
      throw ConfigError("config: data block needs either synthetic or source_csv + target_csv");
  }

  if (doc.contains("probe")) {
    const json& p = doc.at("probe");
    reject_unknown(p, "probe", {"train_fraction", "epochs", "learning_rate", "seed"});
    read_into(p, "train_fraction", rc.probe.train_fraction);
    read_into(p, "epochs", rc.probe.epochs);
    read_into(p, "learning_rate", rc.probe.learning_rate);
    read_into(p, "seed", rc.probe.seed);
  }
  read_into(doc, "out_dir", rc.out_dir);
  if (doc.contains("seeds")) {
    rc.seeds.clear();
    read_into(doc, "seeds", rc.seeds);
    if (rc.seeds.empty()) throw ConfigError("config: seeds must be nonempty");
  }
  if (doc.contains("drop_target_classes")) {
    std::vector<int> drop;
    read_into(doc, "drop_target_classes", drop);
    for (int c : drop) {
      if (c < 0 || c >= rc.train.K)
        throw ConfigError("config: drop_target_classes entry outside [0, K)");
      rc.drop_target_classes.insert(c);
    }
  }

  if (rc.train.K < 1 || rc.train.input_dim < 1 || rc.train.bottleneck_dim < 1)
    throw ConfigError("config: dimensions must be positive");
  if (rc.train.total_iterations < 1) throw ConfigError("config: total_iterations must be >= 1");
  if (rc.train.batch_source < 1 || rc.train.batch_target < 1)
    throw ConfigError("config: batch sizes must be >= 1");
  if (rc.train.eval_interval < 1) throw ConfigError("config: eval_interval must be >= 1");
  return rc;
}

TrainConfig gradcheck_default_config() {
  TrainConfig cfg;
  cfg.algorithm = Algorithm::kMada;
  cfg.K = 3;
  cfg.input_dim = 2;
  cfg.feature_hidden = {8};
  cfg.bottleneck_dim = 6;
  cfg.disc_hidden = {8, 8};
  cfg.batch_source = 2;
  cfg.batch_target = 2;
  return cfg;
}

}  // namespace mada
