// Copyright 2026 The qadra-sched Authors
// SPDX-License-Identifier: Apache-2.0

// qadra: train, evaluate and inspect TD schedulers.

#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qadra/agent/qadra_policy.hpp"
#include "qadra/harness/config.hpp"
#include "qadra/harness/evaluation.hpp"
#include "qadra/harness/training.hpp"
#include "qadra/nn/checkpoint.hpp"

namespace fs = std::filesystem;
using qadra::harness::ExperimentConfig;

namespace {

struct CommonFlags {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out;
  bool deterministic = false;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--config", f.config_path, "Experiment config (INI)")->check(CLI::ExistingFile);
  cmd->add_option("--seed", f.seed, "Override run.seed");
  cmd->add_option("--out", f.out, "Override run.out_dir");
  cmd->add_flag("--deterministic", f.deterministic, "Single-threaded interleaved training");
}

ExperimentConfig resolve(const CommonFlags& f) {
  ExperimentConfig c = f.config_path.empty() ? ExperimentConfig{} : qadra::harness::load_config(f.config_path);
  if (f.seed) c.run.seed = *f.seed;
  if (!f.out.empty()) c.run.out_dir = f.out;
  if (f.deterministic) c.training.deterministic = true;
  c.validate();
  return c;
}

void print_summary(const qadra::harness::RunSummary& s) {
  std::printf("policy %s  ttis %lld\n", s.policy.c_str(), static_cast<long long>(s.ttis));
  std::printf("dl throughput mean %.4f Mbit/s  p10 %.4f  p50 %.4f  p90 %.4f\n", s.mean_dl_throughput_bps / 1e6,
              s.dl_throughput_p10_bps / 1e6, s.dl_throughput_p50_bps / 1e6, s.dl_throughput_p90_bps / 1e6);
  std::printf("voip packets %lld  delayed %lld  fraction %.6f\n", static_cast<long long>(s.voip_packets),
              static_cast<long long>(s.delayed_packets), s.delayed_fraction);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"QADRA time-domain scheduler: training, evaluation and baselines"};
  app.require_subcommand(1);

  CommonFlags train_f, eval_f, base_f, sweep_f;
  std::string eval_ckpt, inspect_ckpt;
  std::vector<int> counts{0, 5, 10, 15, 20};
  bool quiet = false;

  auto* train = app.add_subcommand("train", "Train the agent and write a checkpoint");
  add_common(train, train_f);
  train->add_flag("--quiet", quiet, "Do not echo the training log");

  auto* eval = app.add_subcommand("eval", "Evaluate a trained checkpoint greedily");
  add_common(eval, eval_f);
  eval->add_option("--checkpoint", eval_ckpt, "Checkpoint file")->required()->check(CLI::ExistingFile);

  auto* base = app.add_subcommand("baseline", "Evaluate a baseline policy (policy.name)");
  add_common(base, base_f);

  auto* sweep = app.add_subcommand("sweep", "Baseline throughput versus number of VoIP users");
  add_common(sweep, sweep_f);
  sweep->add_option("--counts", counts, "VoIP user counts")->delimiter(',');

  auto* inspect = app.add_subcommand("inspect-checkpoint", "Print checkpoint metadata");
  inspect->add_option("checkpoint", inspect_ckpt, "Checkpoint file")->required()->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*train) {
      auto c = resolve(train_f);
      if (c.policy.name != "qadra") throw std::invalid_argument("train requires policy.name = qadra");
      const auto r = qadra::harness::run_training(c, c.run.out_dir, [&](const std::string& line) {
        if (!quiet) std::cout << line << '\n';
      });
      std::printf("learner steps %lld  actor ttis %lld  sequences %llu\ncheckpoint %s\n",
                  static_cast<long long>(r.learner_steps), static_cast<long long>(r.actor_ttis),
                  static_cast<unsigned long long>(r.sequences), r.checkpoint_path.c_str());
      if (c.scenario.environment == "toy_sort" && !r.checkpoint.feature_mean.empty()) {
        const auto stats = qadra::agent::stats_from_checkpoint(r.checkpoint);
        const auto t = qadra::harness::evaluate_toy(c, r.checkpoint.params, stats, c.run.seed);
        std::printf("toy sort: %d of %d held-out lists sorted (%.3f)\n", t.sorted, t.lists, t.fraction());
      }
    } else if (*eval || *base) {
      auto c = resolve(*eval ? eval_f : base_f);
      if (*eval) {
        c.policy.name = "qadra";
      } else if (c.policy.name == "qadra") {
        throw std::invalid_argument("baseline requires policy.name = round_robin or proportional_fair");
      }
      if (c.scenario.environment != "scheduler") throw std::invalid_argument("evaluation needs the scheduler environment");
      auto policy = qadra::harness::make_policy(c, *eval ? std::optional<fs::path>(eval_ckpt) : std::nullopt);
      const auto r = qadra::harness::run_eval(c, *policy, c.run.seed);
      qadra::harness::write_eval_outputs(c.run.out_dir, r);
      print_summary(r.summary);
      std::printf("outputs in %s\n", c.run.out_dir.c_str());
    } else if (*sweep) {
      auto c = resolve(sweep_f);
      if (c.policy.name == "qadra") c.policy.name = "round_robin";
      const auto rows = qadra::harness::starvation_sweep(c, counts, c.run.seed);
      fs::create_directories(c.run.out_dir);
      qadra::harness::write_sweep_csv(fs::path(c.run.out_dir) / "sweep.csv", rows);
      std::printf("%-8s %-22s %s\n", "n_voip", "mean_dl_mbit_s", "delayed_fraction");
      for (const auto& r : rows) std::printf("%-8d %-22.6f %.6f\n", r.n_voip, r.mean_dl_throughput_bps / 1e6, r.delayed_fraction);
    } else if (*inspect) {
      const auto ck = qadra::nn::load_checkpoint(inspect_ckpt);
      std::printf("format version %u\n", qadra::nn::kCheckpointVersion);
      std::printf("architecture %s\n", ck.params.arch().describe().c_str());
      std::printf("parameters %zu  version %llu  finite %s\n", ck.params.size(),
                  static_cast<unsigned long long>(ck.params.version()), ck.params.all_finite() ? "yes" : "no");
      if (ck.feature_mean.empty()) {
        std::printf("feature statistics: none (untrained)\n");
      } else {
        for (std::size_t i = 0; i < ck.feature_mean.size(); ++i) {
          std::printf("feature %zu  mean %.6g  std %.6g\n", i, ck.feature_mean[i], ck.feature_std[i]);
        }
      }
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
