// Copyright 2026 The qadra-sched Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <span>

#include "qadra/sim/types.hpp"

namespace qadra::mdp {

/// Per-group reward of one TTI: full-buffer delivered bits and minus the
/// number of VoIP flows whose QoS was violated.
struct RewardVector {
  static constexpr std::size_t kGroups = 2;
  double full_buffer_bits = 0.0;
  double voip = 0.0;

  std::array<double, kGroups> components() const { return {full_buffer_bits, voip}; }
};

/// Scale factors applied before the preference dot product:
/// full-buffer bits are divided by `full_buffer_norm`, the VoIP component
/// is multiplied by `voip_norm`.
struct RewardScales {
  double full_buffer_norm = 200000.0;
  double voip_norm = 0.01;
};

RewardVector compute_reward_vector(const sim::TtiOutcome& outcome);

RewardVector normalize(const RewardVector& r, const RewardScales& scales);

/// ω · normalize(r). Throws std::invalid_argument when ω does not have one
/// entry per group or contains non-finite values.
double scalarize(const RewardVector& r, std::span<const double> preference,
                 const RewardScales& scales = {});

}  // namespace qadra::mdp
