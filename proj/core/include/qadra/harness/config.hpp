// Copyright 2026 The qadra-sched Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "qadra/agent/environment.hpp"
#include "qadra/agent/learner.hpp"
#include "qadra/nn/arch.hpp"
#include "qadra/replay/replay_buffer.hpp"
#include "qadra/sim/types.hpp"

namespace qadra::harness {

struct ScenarioConfig {
  std::string environment = "scheduler";  // scheduler | toy_sort
  int n_voip = 10;
  bool full_buffer = true;
  std::int64_t voip_packet_bits = 320;
  std::int64_t voip_period_ttis = 40;
  int toy_list_size = 4;
  int toy_max_value = 100;
  bool operator==(const ScenarioConfig&) const = default;
};

struct GridConfig {
  int prbs_per_direction = 24;
  std::int64_t bits_per_prb = 672;
  int pdcch_capacity = 8;
  double tti_duration_s = 0.0005;
  double bler = 0.01;
  bool operator==(const GridConfig&) const = default;
};

struct PolicyConfig {
  std::string name = "qadra";  // qadra | round_robin | proportional_fair
  bool voip_first = false;
  double pf_ema = 0.01;
  bool operator==(const PolicyConfig&) const = default;
};

struct RewardConfig {
  std::vector<double> preference{1.0, 1.0};
  double full_buffer_norm = 200000.0;
  double voip_norm = 0.01;
  bool operator==(const RewardConfig&) const = default;
};

struct NetworkConfig {
  std::vector<int> encoder_dense{256, 128};
  std::vector<int> encoder_gru{64, 32, 32};
  std::vector<int> q_hidden{512, 256, 128, 64};
  bool operator==(const NetworkConfig&) const = default;
};

struct TrainingConfig {
  double gamma = 0.99;
  double learning_rate = 1e-4;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_epsilon = 1e-8;
  double max_grad_norm = 0.0;  // 0 disables clipping
  int batch_size = 32;
  std::int64_t replay_capacity = 131072;
  std::int64_t replay_warmup = 20000;
  std::string replay_mode = "prioritized";  // prioritized | uniform
  double alpha = 0.6;
  double beta_start = 0.4;
  double beta_end = 1.0;
  std::string target_mode = "double";  // double | vanilla
  std::string discount = "per_step";   // per_step | per_tti
  std::int64_t target_period = 2500;
  int actors = 4;
  int actor_ttis_per_learner_step = 4;
  int sync_period_ttis = 10;
  std::int64_t total_ttis = 400000;  // per actor
  std::int64_t max_learner_steps = 0;  // 0: bounded by total_ttis only
  double exploration_start = 1.0;
  double exploration_end = 0.4;
  std::int64_t exploration_horizon_ttis = 200000;
  std::int64_t checkpoint_every = 0;  // learner steps; 0 writes the final checkpoint only
  bool deterministic = true;
  bool operator==(const TrainingConfig&) const = default;
};

struct EvalConfig {
  std::int64_t ttis = 60000;
  std::int64_t throughput_window_ttis = 200;
  int toy_lists = 200;
  bool operator==(const EvalConfig&) const = default;
};

struct RunConfig {
  std::uint64_t seed = 1;
  std::string out_dir = "out";
  bool operator==(const RunConfig&) const = default;
};

struct ExperimentConfig {
  ScenarioConfig scenario;
  GridConfig grid;
  PolicyConfig policy;
  RewardConfig reward;
  double saturation_bits = 100000.0;  // [features]
  NetworkConfig network;
  TrainingConfig training;
  EvalConfig eval;
  RunConfig run;

  /// Throws std::invalid_argument naming the offending key.
  void validate() const;

  sim::TrafficConfig traffic() const;
  sim::ResourceGridConfig resource_grid() const;
  nn::NetworkArch arch() const;
  agent::SchedulerEnvConfig scheduler_env() const;
  replay::ReplayConfig replay() const;
  agent::LearnerConfig learner() const;

  bool operator==(const ExperimentConfig&) const = default;
};

/// INI text with [section] headers, `key = value` lines and `#` or `;`
/// comments. Missing keys keep their defaults; unknown sections or keys and
/// malformed values throw std::invalid_argument.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);
/// Every key, with doubles printed to round-trip exactly.
std::string serialize_config(const ExperimentConfig& config);

}  // namespace qadra::harness
