// Copyright 2026 The qadra-sched Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <memory>
#include <string>

#include "qadra/common/rng.hpp"
#include "qadra/mdp/features.hpp"
#include "qadra/nn/checkpoint.hpp"
#include "qadra/nn/params.hpp"
#include "qadra/policy/td_policy.hpp"

namespace qadra::agent {

/// Frozen feature statistics stored in a checkpoint. Throws
/// std::runtime_error when they are missing or have the wrong dimension.
mdp::FeatureStats stats_from_checkpoint(const nn::Checkpoint& ckpt);

/// Trained agent as a time-domain scheduler: greedy (ε = 0) selection sort
/// with frozen parameters and feature statistics.
class QadraPolicy final : public policy::TdPolicy {
 public:
  QadraPolicy(std::shared_ptr<const nn::ParamSet> params, mdp::FeatureStats stats,
              double saturation_bits);
  /// Throws std::runtime_error when the checkpoint lacks feature statistics
  /// or its feature dimension differs from the simulator's.
  static std::unique_ptr<QadraPolicy> from_checkpoint(const nn::Checkpoint& ckpt, double saturation_bits);

  sim::FlowList sort(const sim::FlowList& flows, sim::Tti now) override;
  std::string name() const override { return "qadra"; }

 private:
  std::shared_ptr<const nn::ParamSet> params_;
  mdp::FeatureStats stats_;
  double saturation_bits_;
  Rng rng_{0};  // never consumed at ε = 0
};

}  // namespace qadra::agent
