// Copyright 2026 The qadra-sched Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "qadra/common/rng.hpp"
#include "qadra/mdp/features.hpp"
#include "qadra/nn/adam.hpp"
#include "qadra/nn/params.hpp"
#include "qadra/replay/replay_buffer.hpp"

namespace qadra::agent {

enum class TargetMode { kVanilla, kDouble };

/// kPerStep discounts every sort step. kPerTti discounts only the final
/// transition of a sort, so the length of later lists does not change the
/// weight of later rewards.
enum class DiscountMode { kPerStep, kPerTti };

/// Bootstrap value over the candidate columns of `candidates` at target
/// state (s_in⁻, s_out⁻): vanilla max_j Q⁻, or double Q⁻(x_{j*}) with j*
/// the online argmax. Returns 0 for an empty candidate set.
double dqn_target(const nn::ParamSet& online, const nn::ParamSet& target,
                  const Eigen::VectorXd& s_in, const Eigen::VectorXd& s_out,
                  const Eigen::MatrixXd& candidates, TargetMode mode);

struct SequenceLoss {
  double loss = 0.0;            // (1/N) Σ_k ½ δ_k²
  std::vector<double> td;       // δ_k = y_k − Q_k, one per action
  double mean_abs_td() const;
};

/// Loss of one stored sort (features already normalized). Intermediate
/// step k is regressed on γ · bootstrap (1 · bootstrap under kPerTti) over
/// the list left after a_k, with
/// the target output state including a_k; the final step on
/// r + γ · bootstrap over the next list with a zero target output state.
/// When `grad` is non-empty, `weight` · ∂loss/∂Γ is added to it.
SequenceLoss sequence_loss(const nn::ParamSet& online, const nn::ParamSet& target,
                           const replay::SortSequence& seq, double gamma, TargetMode mode,
                           double weight, std::span<double> grad,
                           DiscountMode discount = DiscountMode::kPerStep);

struct LearnerConfig {
  double gamma = 0.99;
  std::size_t batch_size = 32;
  std::int64_t target_period = 2500;
  TargetMode target_mode = TargetMode::kDouble;
  DiscountMode discount = DiscountMode::kPerStep;
  double beta_start = 0.4;
  double beta_end = 1.0;
  std::int64_t beta_steps = 100000;
  nn::AdamConfig adam;

  void validate() const;
  double beta_at(std::int64_t step) const;
};

struct LearnerStepStats {
  std::int64_t step = 0;
  double loss = 0.0;
  double mean_abs_td = 0.0;
  double beta = 0.0;
};

/// Owns the online and target parameters and the optimizer state.
class Learner {
 public:
  Learner(LearnerConfig config, nn::ParamSet initial, mdp::FeatureStats stats);

  /// One batch update from `buffer`; priorities of the sampled sequences
  /// are refreshed. Throws std::logic_error when the buffer is not ready
  /// and std::runtime_error on a non-finite loss.
  LearnerStepStats step(replay::ReplayBuffer& buffer, Rng& rng);

  const nn::ParamSet& online() const { return online_; }
  const nn::ParamSet& target() const { return target_; }
  const mdp::FeatureStats& stats() const { return stats_; }
  std::int64_t steps() const { return steps_; }
  /// Immutable copy of the online parameters for actors.
  std::shared_ptr<const nn::ParamSet> snapshot() const;

 private:
  LearnerConfig config_;
  nn::ParamSet online_;
  nn::ParamSet target_;
  nn::Adam adam_;
  mdp::FeatureStats stats_;
  nn::FlatVector grad_;
  std::int64_t steps_ = 0;
};

}  // namespace qadra::agent
