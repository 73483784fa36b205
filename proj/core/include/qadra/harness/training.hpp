// Copyright 2026 The qadra-sched Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <string>

#include "qadra/agent/environment.hpp"
#include "qadra/harness/config.hpp"
#include "qadra/mdp/features.hpp"
#include "qadra/nn/checkpoint.hpp"
#include "qadra/replay/replay_buffer.hpp"

namespace qadra::harness {

struct TrainingResult {
  nn::Checkpoint checkpoint;
  std::int64_t learner_steps = 0;
  std::int64_t actor_ttis = 0;  // summed over actors
  std::uint64_t sequences = 0;
  std::filesystem::path checkpoint_path;
  std::filesystem::path log_path;
};

/// Environment for actor `index` as selected by config.scenario.environment.
std::unique_ptr<agent::Environment> make_environment(const ExperimentConfig& config, std::uint64_t seed);

/// Feature statistics over the input lists stored in `buffer`, frozen.
mdp::FeatureStats stats_from_buffer(const replay::ReplayBuffer& buffer);

/// Warm-up with ε = 1 until the replay buffer is ready, then freezes the
/// feature statistics and trains until config.training.total_ttis per actor
/// (or max_learner_steps). Writes training_log.csv, checkpoint.qckp and
/// config.ini into `out_dir`. `progress` is called after every logged
/// learner step. Throws std::runtime_error on a non-finite loss.
TrainingResult run_training(const ExperimentConfig& config, const std::filesystem::path& out_dir,
                            const std::function<void(const std::string&)>& progress = {});

}  // namespace qadra::harness
