// Copyright 2026 The qadra-sched Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <memory>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "qadra/agent/environment.hpp"
#include "qadra/common/rng.hpp"
#include "qadra/mdp/features.hpp"
#include "qadra/nn/params.hpp"
#include "qadra/replay/replay_buffer.hpp"

namespace qadra::agent {

struct SortDecision {
  std::vector<int> order;    // original indices, highest priority first
  std::vector<int> actions;  // selection-sort trace
};

/// ε-greedy selection sort of the columns of `features` (normalized,
/// feature_dim × N). The input encoding is computed once over the whole
/// list; the output encoding is advanced with each chosen element. Ties in
/// the greedy argmax go to the lowest remaining index. `params` may be null
/// when ε ≥ 1.
SortDecision actor_sort(const nn::ParamSet* params, const Eigen::MatrixXd& features,
                        double epsilon, Rng& rng);

/// Index of the first maximum.
int argmax_first(const Eigen::RowVectorXd& q);

/// Column-wise (x − mean) / std with frozen statistics.
Eigen::MatrixXd normalize_columns(const Eigen::MatrixXd& raw, const mdp::FeatureStats& stats);

/// One actor process: owns an environment and emits completed sort
/// sequences (the next list is attached one TTI later).
class Actor {
 public:
  Actor(std::unique_ptr<Environment> env, std::uint64_t seed);

  /// Runs one decision step. Returns the sequence completed by this step,
  /// if any. `params` and `stats` may be null while ε ≥ 1.
  std::optional<replay::SortSequence> step(const nn::ParamSet* params,
                                           const mdp::FeatureStats* stats, double epsilon);

  Environment& environment() { return *env_; }
  std::int64_t steps() const { return steps_; }

 private:
  std::unique_ptr<Environment> env_;
  Rng rng_;
  std::optional<replay::SortSequence> pending_;
  std::int64_t steps_ = 0;
};

}  // namespace qadra::agent
