// Copyright 2026 The qadra-sched Authors
// SPDX-License-Identifier: Apache-2.0

#include "qadra/harness/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qadra::harness {

std::vector<double> percentiles(std::span<const double> samples, std::span<const double> quantiles) {
  if (samples.empty()) throw std::invalid_argument("percentiles of an empty sample");
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const auto n = static_cast<double>(sorted.size());
  std::vector<double> out;
  out.reserve(quantiles.size());
  for (double q : quantiles) {
    if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("quantile must lie in [0, 1]");
    const auto rank = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(q * n)));
    out.push_back(sorted[std::min(rank, sorted.size()) - 1]);
  }
  return out;
}

std::vector<double> windowed_dl_throughput(std::span<const sim::TtiRecord> ttis, std::int64_t window,
                                           double tti_duration_s) {
  if (window <= 0) throw std::invalid_argument("throughput window must be > 0");
  std::vector<double> out;
  const auto w = static_cast<std::size_t>(window);
  for (std::size_t b = 0; b < ttis.size(); b += w) {
    const std::size_t e = std::min(ttis.size(), b + w);
    if (e - b < w && !out.empty()) break;
    double bits = 0.0;
    for (std::size_t i = b; i < e; ++i) bits += static_cast<double>(ttis[i].dl_bits);
    out.push_back(bits / (static_cast<double>(e - b) * tti_duration_s));
  }
  return out;
}

double delayed_fraction(std::span<const sim::DelayRecord> delays, double bound_s) {
  std::size_t n = 0, late = 0;
  for (const auto& d : delays) {
    if (d.group != sim::TrafficGroup::kVoip) continue;
    ++n;
    if (sim::exceeds_delay_bound(d.delay_s, bound_s)) ++late;
  }
  return n == 0 ? 0.0 : static_cast<double>(late) / static_cast<double>(n);
}

}  // namespace qadra::harness
