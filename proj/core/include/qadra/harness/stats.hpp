// Copyright 2026 The qadra-sched Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "qadra/sim/types.hpp"

namespace qadra::harness {

/// Nearest-rank quantiles: for q ∈ [0, 1] the ⌈q·n⌉-th smallest sample
/// (the smallest for q = 0). Throws std::invalid_argument on empty input or
/// q outside [0, 1].
std::vector<double> percentiles(std::span<const double> samples, std::span<const double> quantiles);

/// DL throughput in bit/s of consecutive windows of `window` TTIs. A
/// trailing partial window is dropped unless it is the only one.
std::vector<double> windowed_dl_throughput(std::span<const sim::TtiRecord> ttis, std::int64_t window,
                                           double tti_duration_s);

/// Fraction of VoIP packets whose (delivered or pending) delay exceeds
/// `bound_s`; 0 when there are none.
double delayed_fraction(std::span<const sim::DelayRecord> delays, double bound_s);

}  // namespace qadra::harness
