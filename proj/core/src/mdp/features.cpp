// Copyright 2026 The qadra-sched Authors
// SPDX-License-Identifier: Apache-2.0

#include "qadra/mdp/features.hpp"

#include <cmath>
#include <stdexcept>

namespace qadra::mdp {

double traffic_code(sim::TrafficGroup group) { return static_cast<double>(static_cast<int>(group)); }

FeatureVector extract_features(const sim::DataFlow& flow, sim::Tti now, double saturation_bits) {
  FeatureVector x{};
  x[kTimeSinceScheduled] = flow.last_scheduled ? static_cast<double>(now - *flow.last_scheduled)
                                               : static_cast<double>(now + 1);
  x[kTrafficType] = traffic_code(flow.group);
  x[kBufferBits] = flow.is_full_buffer() ? saturation_bits : static_cast<double>(flow.buffered_bits());
  x[kIsUplink] = flow.is_uplink() ? 1.0 : 0.0;
  x[kIsNewTx] = flow.is_new_transmission ? 1.0 : 0.0;
  x[kIsRetx] = flow.is_retransmission ? 1.0 : 0.0;
  return x;
}

void FeatureStats::accumulate(const FeatureVector& x) {
  if (finalized_) throw std::logic_error("feature statistics are frozen");
  ++count_;
  const double n = static_cast<double>(count_);
  for (std::size_t i = 0; i < kFeatureDim; ++i) {
    const double delta = x[i] - mean_[i];
    mean_[i] += delta / n;
    m2_[i] += delta * (x[i] - mean_[i]);
  }
}

void FeatureStats::finalize() {
  if (count_ == 0) throw std::logic_error("no samples accumulated");
  for (std::size_t i = 0; i < kFeatureDim; ++i) {
    const double sd = std::sqrt(m2_[i] / static_cast<double>(count_));
    std_[i] = sd > 0.0 ? sd : 1.0;
  }
  finalized_ = true;
}

FeatureStats FeatureStats::from_moments(const FeatureVector& mean, const FeatureVector& stddev) {
  FeatureStats s;
  s.mean_ = mean;
  for (std::size_t i = 0; i < kFeatureDim; ++i) {
    if (!(stddev[i] > 0.0) || !std::isfinite(stddev[i])) {
      throw std::invalid_argument("feature std must be positive and finite");
    }
    s.std_[i] = stddev[i];
  }
  s.count_ = 1;
  s.finalized_ = true;
  return s;
}

FeatureVector FeatureStats::normalize(const FeatureVector& x) const {
  if (!finalized_) throw std::logic_error("feature statistics not finalized");
  FeatureVector z{};
  for (std::size_t i = 0; i < kFeatureDim; ++i) z[i] = (x[i] - mean_[i]) / std_[i];
  return z;
}

}  // namespace qadra::mdp
