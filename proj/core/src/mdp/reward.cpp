// Copyright 2026 The qadra-sched Authors
// SPDX-License-Identifier: Apache-2.0

#include "qadra/mdp/reward.hpp"

#include <cmath>
#include <stdexcept>
#include <string>


namespace qadra::mdp {

RewardVector compute_reward_vector(const sim::TtiOutcome& outcome) {
  return {static_cast<double>(outcome.full_buffer_bits), -static_cast<double>(outcome.voip_violations)};
}

RewardVector normalize(const RewardVector& r, const RewardScales& scales) {
  return {r.full_buffer_bits / scales.full_buffer_norm, r.voip * scales.voip_norm};
}

double scalarize(const RewardVector& r, std::span<const double> preference,
                 const RewardScales& scales) {
  if (preference.size() != RewardVector::kGroups) {
    throw std::invalid_argument("preference vector needs " + std::to_string(RewardVector::kGroups) +
                                " entries, got " + std::to_string(preference.size()));
  }
  const auto c = normalize(r, scales).components();
  double total = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (!std::isfinite(preference[i])) throw std::invalid_argument("non-finite preference weight");
    total += preference[i] * c[i];
  }
  return total;
}

}  // namespace qadra::mdp
