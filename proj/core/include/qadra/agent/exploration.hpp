// Copyright 2026 The qadra-sched Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>

namespace qadra::agent {

/// ε_p = a^(1 + (p mod 8)). Throws std::invalid_argument unless a ∈ (0, 1].
double epsilon_schedule(std::uint64_t p, double a);

/// Exploration base a(t): exponential decay from `start` to `end` over
/// `horizon` TTIs, constant at `end` afterwards.
struct ExplorationBase {
  double start = 1.0;
  double end = 0.4;
  std::int64_t horizon = 200000;

  void validate() const;
  double at(std::int64_t tti) const;
};

/// Per-actor ε state. Before learning starts every sync yields ε = 1 and the
/// period counter p stays at 0; afterwards sync p uses a(ttis since start).
struct ActorExploration {
  std::uint64_t syncs = 0;
  double epsilon = 1.0;

  void sync(bool learning, const ExplorationBase& base, std::int64_t ttis_since_learning);
};

}  // namespace qadra::agent
