// Copyright 2026 The qadra-sched Authors
// SPDX-License-Identifier: Apache-2.0

#include "qadra/agent/exploration.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qadra::agent {

double epsilon_schedule(std::uint64_t p, double a) {
  if (!(a > 0.0 && a <= 1.0)) throw std::invalid_argument("exploration base must lie in (0, 1]");
  return std::pow(a, static_cast<double>(1 + p % 8));
}

void ExplorationBase::validate() const {
  if (!(start > 0.0 && start <= 1.0) || !(end > 0.0 && end <= 1.0)) {
    throw std::invalid_argument("exploration endpoints must lie in (0, 1]");
  }
  if (horizon <= 0) throw std::invalid_argument("exploration horizon must be > 0");
}

double ExplorationBase::at(std::int64_t tti) const {
  const double frac = std::clamp(static_cast<double>(tti) / static_cast<double>(horizon), 0.0, 1.0);
  return start * std::pow(end / start, frac);
}

void ActorExploration::sync(bool learning, const ExplorationBase& base, std::int64_t ttis_since_learning) {
  if (!learning) {
    epsilon = 1.0;
    return;
  }
  epsilon = epsilon_schedule(syncs, base.at(ttis_since_learning));
  ++syncs;
}

}  // namespace qadra::agent
