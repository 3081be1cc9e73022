// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mada/checkpoint.hpp"
#include "mada/config.hpp"
#include "mada/data.hpp"
#include "mada/eval.hpp"
#include "mada/trainer.hpp"
#include "mada/verify.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

struct CommonArgs {
  std::string config_path;
  std::string out_dir;
  std::vector<uint64_t> seeds;
};

mada::RunConfig load_with_overrides(const CommonArgs& args) {
  if (args.config_path.empty()) throw mada::ConfigError("missing --config");
  mada::RunConfig rc = mada::load_run_config(args.config_path);
  if (!args.out_dir.empty()) rc.out_dir = args.out_dir;
  if (!args.seeds.empty()) rc.seeds = args.seeds;
  return rc;
}

// Drops the classes in `remove` from an evaluation-labeled target set.
void apply_target_drop(mada::Dataset& target, std::vector<int>& truth,
                       const std::set<int>& remove) {
  if (remove.empty()) return;
  if (truth.empty())
    throw mada::ConfigError("drop_target_classes needs target ground truth labels");
  std::vector<int> keep;
  for (size_t i = 0; i < truth.size(); ++i)
    if (!remove.count(truth[i])) keep.push_back(static_cast<int>(i));
  mada::Tensor feats(static_cast<int>(keep.size()), target.features.cols);
  std::vector<int> new_truth;
  for (size_t r = 0; r < keep.size(); ++r) {
    for (int d = 0; d < target.features.cols; ++d)
      feats.at(static_cast<int>(r), d) = target.features.at(keep[r], d);
    new_truth.push_back(truth[static_cast<size_t>(keep[r])]);
  }
  target.features = std::move(feats);
  target.labels.assign(new_truth.size(), mada::Dataset::kUnlabeled);
  truth = std::move(new_truth);
}

struct ResolvedData {
  mada::Dataset source;
  mada::Dataset target;
  std::vector<int> truth;  // empty when unknown
};

// Materializes the config's data block for one run seed. Synthetic data is
// regenerated per seed so repetition seeds cover sampling noise; CSV data
// is fixed across seeds.
ResolvedData resolve_data(const mada::RunConfig& rc, uint64_t seed) {
  ResolvedData out;
  if (rc.synthetic) {
    mada::SyntheticConfig sc = *rc.synthetic;
    sc.seed = seed;
    mada::GeneratedData gen = mada::gen_multimode(sc);
    out.source = std::move(gen.source);
    out.target = std::move(gen.target);
    out.truth = std::move(gen.target_truth);
  } else {
    out.source = mada::load_csv(rc.source_csv, rc.train.K);
    out.target = mada::load_csv(rc.target_csv, rc.train.K);
    if (!rc.target_truth_csv.empty()) {
      mada::Dataset truth_ds = mada::load_csv(rc.target_truth_csv, rc.train.K);
      if (truth_ds.rows() != out.target.rows())
        throw mada::ConfigError("target_truth_csv row count does not match target_csv");
      out.truth = truth_ds.labels;
    } else {
      // A labeled target CSV doubles as its own ground truth (labels are
      // still hidden from training).
      bool any = false;
      for (int l : out.target.labels) any = any || l != mada::Dataset::kUnlabeled;
      if (any) out.truth = out.target.labels;
    }
    for (int& l : out.target.labels) l = mada::Dataset::kUnlabeled;
  }
  apply_target_drop(out.target, out.truth, rc.drop_target_classes);
  return out;
}

ordered_json metrics_to_json(const mada::Metrics& m) {
  ordered_json j;
  j["iteration"] = m.iteration;
  j["p"] = m.p;
  j["eta"] = m.eta;
  j["lambda"] = m.lambda;
  j["label_loss"] = m.label_loss;
  j["domain_loss"] = m.domain_loss;
  j["target_accuracy"] = m.target_accuracy;
  j["source_accuracy"] = m.source_accuracy;
  if (m.has_a_distance) j["a_distance"] = m.a_distance;
  return j;
}

int cmd_gen(const CommonArgs& args) {
  mada::RunConfig rc = load_with_overrides(args);
  if (!rc.synthetic) throw mada::ConfigError("gen needs a data.synthetic block");
  mada::SyntheticConfig sc = *rc.synthetic;
  if (!args.seeds.empty()) sc.seed = args.seeds[0];

  mada::GeneratedData gen = mada::gen_multimode(sc);
  fs::create_directories(rc.out_dir);
  std::string src_path = (fs::path(rc.out_dir) / "source.csv").string();
  std::string tgt_path = (fs::path(rc.out_dir) / "target.csv").string();
  std::string truth_path = (fs::path(rc.out_dir) / "target_truth.csv").string();
  mada::save_csv(src_path, gen.source);
  mada::save_csv(tgt_path, gen.target);
  mada::save_csv(truth_path, gen.target, &gen.target_truth);

  ordered_json summary;
  summary["source_rows"] = gen.source.rows();
  summary["target_rows"] = gen.target.rows();
  summary["class_count"] = sc.class_count;
  summary["rotation_deg"] = mada::effective_rotation_deg(sc);
  summary["seed"] = sc.seed;
  summary["files"] = {src_path, tgt_path, truth_path};
  std::cout << summary.dump() << "\n";
  return 0;
}

int cmd_train(const CommonArgs& args) {
  mada::RunConfig rc = load_with_overrides(args);
  fs::create_directories(rc.out_dir);

  std::vector<uint64_t> ok_seeds;
  std::vector<uint64_t> failed_seeds;
  std::vector<double> finals;
  bool truth_known = true;

  for (uint64_t seed : rc.seeds) {
    fs::path seed_dir = fs::path(rc.out_dir) / ("seed_" + std::to_string(seed));
    fs::create_directories(seed_dir);
    std::ofstream metrics_out(seed_dir / "metrics.jsonl");
    if (!metrics_out)
      throw std::runtime_error("cannot open " + (seed_dir / "metrics.jsonl").string());

    ResolvedData data = resolve_data(rc, seed);
    mada::TrainConfig tc = rc.train;
    tc.seed = seed;
    try {
      mada::TrainResult res =
          mada::train(tc, rc.probe, data.source, data.target,
                      data.truth.empty() ? nullptr : &data.truth);
      for (const auto& m : res.history) metrics_out << metrics_to_json(m).dump() << "\n";
      mada::save_checkpoint((seed_dir / "checkpoint.txt").string(), tc, res.model);
      ok_seeds.push_back(seed);
      finals.push_back(res.history.back().target_accuracy);
      truth_known = truth_known && !data.truth.empty();
    } catch (const mada::NanLossError& e) {
      ordered_json diag;
      diag["iteration"] = e.iteration;
      diag["error"] = e.what();
      metrics_out << diag.dump() << "\n";
      std::cerr << "seed " << seed << ": " << e.what() << " (run aborted)\n";
      failed_seeds.push_back(seed);
    }
  }

  ordered_json summary;
  summary["algorithm"] = mada::to_string(rc.train.algorithm);
  summary["seeds"] = ok_seeds;
  summary["failed_seeds"] = failed_seeds;
  if (!ok_seeds.empty() && truth_known) {
    double mean = 0.0;
    for (double a : finals) mean += a;
    mean /= static_cast<double>(finals.size());
    double var = 0.0;
    for (double a : finals) var += (a - mean) * (a - mean);
    double stderr_ = finals.size() > 1
                         ? std::sqrt(var / static_cast<double>(finals.size() - 1)) /
                               std::sqrt(static_cast<double>(finals.size()))
                         : 0.0;
    ordered_json acc;
    acc["per_seed"] = finals;
    acc["mean"] = mean;
    acc["stderr"] = stderr_;
    summary["final_target_accuracy"] = acc;
  } else {
    summary["final_target_accuracy"] = nullptr;
  }

  std::ofstream sum_out(fs::path(rc.out_dir) / "summary.json");
  sum_out << summary.dump(2) << "\n";
  sum_out.close();
  std::cout << summary.dump() << "\n";
  return ok_seeds.empty() ? 1 : 0;
}

int cmd_eval(const std::string& checkpoint_path, const std::string& data_path,
             const std::string& truth_path, bool adist, const std::string& against_path,
             const std::string& export_path) {
  if (checkpoint_path.empty() || data_path.empty())
    throw mada::ConfigError("eval needs --checkpoint and --data");
  if (adist && against_path.empty())
    throw mada::ConfigError("--adist needs --against <csv> for the second feature set");

  mada::LoadedCheckpoint ck = mada::load_checkpoint(checkpoint_path);
  mada::Dataset data = mada::load_csv(data_path, ck.cfg.K);
  if (data.features.cols != ck.cfg.input_dim)
    throw mada::ConfigError("eval: data has " + std::to_string(data.features.cols) +
                            " feature columns, checkpoint expects " +
                            std::to_string(ck.cfg.input_dim));

  ordered_json report;
  report["rows"] = data.rows();

  std::vector<int> truth;
  if (!truth_path.empty()) {
    mada::Dataset tds = mada::load_csv(truth_path, ck.cfg.K);
    if (tds.rows() != data.rows())
      throw mada::ConfigError("eval: truth row count does not match data");
    truth = tds.labels;
  } else {
    bool any = false;
    for (int l : data.labels) any = any || l != mada::Dataset::kUnlabeled;
    if (any) truth = data.labels;
  }
  if (!truth.empty()) report["accuracy"] = mada::accuracy(ck.model, data, truth);

  if (adist) {
    mada::Dataset other = mada::load_csv(against_path, ck.cfg.K);
    if (other.features.cols != ck.cfg.input_dim)
      throw mada::ConfigError("eval: --against dimensionality mismatch");
    mada::Tensor fa = mada::mlp_forward_values(ck.model.feature_extractor, data.features);
    mada::Tensor fb = mada::mlp_forward_values(ck.model.feature_extractor, other.features);
    report["a_distance"] = mada::proxy_a_distance(fa, fb, mada::ProbeConfig{});
  }

  if (!export_path.empty()) {
    mada::export_embeddings(ck.model, data, export_path);
    report["export"] = export_path;
  }

  std::cout << report.dump() << "\n";
  return 0;
}

int cmd_gradcheck(const CommonArgs& args) {
  mada::TrainConfig base = mada::gradcheck_default_config();
  if (!args.config_path.empty()) {
    mada::RunConfig rc = mada::load_run_config(args.config_path);
    base = rc.train;
  }
  if (base.batch_source + base.batch_target > 8)
    throw mada::ConfigError("gradcheck config must use at most 8 batch rows");

  const double lambda = 0.7, h = 1e-5, tol = 1e-4;
  std::vector<uint64_t> data_seeds = args.seeds.empty()
                                         ? std::vector<uint64_t>{1, 2, 3}
                                         : args.seeds;

  bool all_pass = true;
  double worst = 0.0;
  for (mada::Algorithm algo :
       {mada::Algorithm::kMada, mada::Algorithm::kDann, mada::Algorithm::kSourceOnly}) {
    mada::TrainConfig cfg = base;
    cfg.algorithm = algo;
    for (uint64_t ds : data_seeds) {
      cfg.seed = ds;  // parameter init seed moves with the data seed
      mada::GradCheckReport rep = mada::gradcheck_graph(cfg, ds, lambda, h, tol);
      for (const auto& g : rep.groups)
        std::printf("%-12s seed %llu  %-18s max_rel_err %.3e\n",
                    mada::to_string(algo).c_str(), static_cast<unsigned long long>(ds),
                    g.name.c_str(), g.max_rel_error);
      all_pass = all_pass && rep.pass;
      worst = std::max(worst, rep.max_rel_error);
    }
  }
  std::printf("gradcheck %s: max relative error %.3e (tolerance %.1e)\n",
              all_pass ? "PASS" : "FAIL", worst, tol);
  return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adversarial domain adaptation training engine (multi-discriminator)"};
  app.require_subcommand(1);

  CommonArgs args;
  std::string checkpoint_path, data_path, truth_path, against_path, export_path;
  bool adist = false;

  auto add_common = [&](CLI::App* sub, bool with_out = true) {
    sub->add_option("--config", args.config_path, "JSON run configuration");
    if (with_out) sub->add_option("--out", args.out_dir, "output directory (overrides config)");
    sub->add_option("--seed", args.seeds, "seed list (overrides config)");
  };

  CLI::App* gen = app.add_subcommand("gen", "generate synthetic source/target CSVs");
  add_common(gen);
  CLI::App* train = app.add_subcommand("train", "train one run per seed and summarize");
  add_common(train);
  CLI::App* eval = app.add_subcommand("eval", "evaluate a checkpoint on a dataset");
  eval->add_option("--checkpoint", checkpoint_path, "checkpoint file")->required();
  eval->add_option("--data", data_path, "dataset CSV")->required();
  eval->add_option("--truth", truth_path, "ground-truth CSV for accuracy");
  eval->add_flag("--adist", adist, "compute proxy A-distance against --against");
  eval->add_option("--against", against_path, "second dataset CSV for --adist");
  eval->add_option("--export", export_path, "write bottleneck embeddings CSV");
  CLI::App* gradcheck = app.add_subcommand("gradcheck", "finite-difference gradient check");
  add_common(gradcheck, /*with_out=*/false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (gen->parsed()) return cmd_gen(args);
    if (train->parsed()) return cmd_train(args);
    if (eval->parsed())
      return cmd_eval(checkpoint_path, data_path, truth_path, adist, against_path, export_path);
    if (gradcheck->parsed()) return cmd_gradcheck(args);
  } catch (const mada::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
