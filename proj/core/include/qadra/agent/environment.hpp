// Copyright 2026 The qadra-sched Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "qadra/common/rng.hpp"
#include "qadra/mdp/reward.hpp"
#include "qadra/sim/simulator.hpp"

namespace qadra::agent {

/// A source of lists to sort. Each decision step is observe() followed by
/// act() with an ordering of the observed list.
class Environment {
 public:
  virtual ~Environment() = default;

  /// Raw (unnormalized) features of the next list, feature_dim × N. N may
  /// be zero.
  virtual Eigen::MatrixXd observe() = 0;
  /// Applies `order` (indices into the observed list, highest priority
  /// first) and returns the scalar reward.
  virtual double act(const std::vector<int>& order) = 0;
  /// Episodic environments start a fresh, unrelated list at every step, so
  /// stored sequences carry no bootstrap list.
  virtual bool episodic() const { return false; }
};

/// Raw features of `flows` as columns (kFeatureDim × N).
Eigen::MatrixXd flow_feature_matrix(const sim::FlowList& flows, sim::Tti now, double saturation_bits);

struct SchedulerEnvConfig {
  sim::TrafficConfig traffic;
  sim::ResourceGridConfig grid;
  std::vector<double> preference{1.0, 1.0};
  mdp::RewardScales scales;
  double saturation_bits = 100000.0;
};

/// Cell simulator as an environment: the list is the TTI's schedulable
/// flows and the reward the scalarized per-group reward of the TTI.
class SchedulerEnvironment final : public Environment {
 public:
  SchedulerEnvironment(SchedulerEnvConfig config, std::uint64_t seed);

  Eigen::MatrixXd observe() override;
  double act(const std::vector<int>& order) override;

  const sim::Simulator& simulator() const { return sim_; }
  sim::Simulator& simulator() { return sim_; }
  const sim::TtiOutcome& last_outcome() const { return last_outcome_; }

 private:
  SchedulerEnvConfig config_;
  sim::Simulator sim_;
  sim::FlowList flows_;
  sim::TtiOutcome last_outcome_;
};

/// Number of pairs (i < j) with values[i] > values[j].
int inversion_count(std::span<const double> values);

/// Sorting task: `list_size` distinct integers from [0, max_value), value
/// in feature 0 and all other features zero; reward −inversions of the
/// ordering read as an ascending sequence.
class ToySortEnvironment final : public Environment {
 public:
  ToySortEnvironment(int list_size, int max_value, std::uint64_t seed);

  Eigen::MatrixXd observe() override;
  double act(const std::vector<int>& order) override;
  bool episodic() const override { return true; }

  /// Draws one list without touching the environment's own stream.
  static Eigen::MatrixXd draw_list(int list_size, int max_value, Rng& rng);

 private:
  int list_size_;
  int max_value_;
  Rng rng_;
  Eigen::MatrixXd current_;
};

}  // namespace qadra::agent
