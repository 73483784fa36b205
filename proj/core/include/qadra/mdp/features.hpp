// Copyright 2026 The qadra-sched Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>

#include "qadra/sim/types.hpp"

namespace qadra::mdp {

inline constexpr std::size_t kFeatureDim = 6;
using FeatureVector = std::array<double, kFeatureDim>;

enum FeatureIndex : std::size_t {
  kTimeSinceScheduled = 0,
  kTrafficType = 1,
  kBufferBits = 2,
  kIsUplink = 3,
  kIsNewTx = 4,
  kIsRetx = 5,
};

/// Integer code of a traffic group as fed to the networks.
double traffic_code(sim::TrafficGroup group);

/// Builds the 6-component flow descriptor. Never-scheduled flows report
/// now + 1 TTIs since last scheduled; full-buffer flows report
/// `saturation_bits` buffered bits.
FeatureVector extract_features(const sim::DataFlow& flow, sim::Tti now, double saturation_bits);

/// Per-component mean and standard deviation, accumulated over a warm-up
/// corpus and then frozen.
class FeatureStats {
 public:
  void accumulate(const FeatureVector& x);
  /// Freezes the statistics; zero-variance components get std = 1.
  /// Throws std::logic_error when nothing was accumulated.
  void finalize();

  static FeatureStats from_moments(const FeatureVector& mean, const FeatureVector& stddev);

  bool finalized() const { return finalized_; }
  std::uint64_t count() const { return count_; }
  const FeatureVector& mean() const { return mean_; }
  const FeatureVector& stddev() const { return std_; }

  /// (x − mean) / std componentwise. Throws std::logic_error before finalize().
  FeatureVector normalize(const FeatureVector& x) const;

 private:
  std::uint64_t count_ = 0;
  FeatureVector mean_{};
  FeatureVector m2_{};
  FeatureVector std_{1, 1, 1, 1, 1, 1};
  bool finalized_ = false;
};

}  // namespace qadra::mdp
