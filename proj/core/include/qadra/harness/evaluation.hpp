// Copyright 2026 The qadra-sched Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "qadra/harness/config.hpp"
#include "qadra/mdp/features.hpp"
#include "qadra/nn/params.hpp"
#include "qadra/policy/td_policy.hpp"
#include "qadra/sim/types.hpp"

namespace qadra::harness {

struct RunSummary {
  std::string policy;
  std::int64_t ttis = 0;
  double mean_dl_throughput_bps = 0.0;
  double dl_throughput_p10_bps = 0.0;
  double dl_throughput_p50_bps = 0.0;
  double dl_throughput_p90_bps = 0.0;
  std::int64_t voip_packets = 0;
  std::int64_t delayed_packets = 0;
  double delayed_fraction = 0.0;
  double reward_full_buffer_bits = 0.0;
  double reward_voip = 0.0;
  double runtime_s = 0.0;
};

struct EvalResult {
  RunSummary summary;
  sim::MetricsLog metrics;
};

/// Policy named by config.policy.name; `qadra` loads `checkpoint`.
std::unique_ptr<policy::TdPolicy> make_policy(const ExperimentConfig& config,
                                              const std::optional<std::filesystem::path>& checkpoint);

/// Simulates config.eval.ttis TTIs with `policy` (greedy for the agent).
EvalResult run_eval(const ExperimentConfig& config, policy::TdPolicy& policy, std::uint64_t seed);

/// Writes tti.csv, delays.csv and summary.json into `dir`.
void write_eval_outputs(const std::filesystem::path& dir, const EvalResult& result);
std::string summary_json(const RunSummary& summary);

struct SweepRow {
  int n_voip = 0;
  double mean_dl_throughput_bps = 0.0;
  double delayed_fraction = 0.0;
};

/// One baseline evaluation per VoIP count, same seed for every row.
std::vector<SweepRow> starvation_sweep(const ExperimentConfig& config, const std::vector<int>& counts,
                                       std::uint64_t seed);
void write_sweep_csv(const std::filesystem::path& path, const std::vector<SweepRow>& rows);

struct ToyEvalResult {
  int lists = 0;
  int sorted = 0;
  double fraction() const { return lists == 0 ? 0.0 : static_cast<double>(sorted) / lists; }
};

/// Greedy sorts of config.eval.toy_lists held-out lists; a list counts when
/// the output has no inversions.
ToyEvalResult evaluate_toy(const ExperimentConfig& config, const nn::ParamSet& params,
                           const mdp::FeatureStats& stats, std::uint64_t seed);

}  // namespace qadra::harness
