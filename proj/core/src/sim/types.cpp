// Copyright 2026 The qadra-sched Authors
// SPDX-License-Identifier: Apache-2.0

#include "qadra/sim/types.hpp"

#include <algorithm>
#include <stdexcept>

namespace qadra::sim {

std::string_view to_string(TrafficGroup group) {
  return group == TrafficGroup::kFullBuffer ? "full_buffer" : "voip";
}

std::string_view to_string(Direction direction) {
  return direction == Direction::kUplink ? "ul" : "dl";
}

QosRequirement QosRequirement::max_delay(double seconds) {
  if (!(seconds > 0.0)) {
    throw std::invalid_argument("max_delay must be positive");
  }
  QosRequirement q;
  q.max_delay_s_ = seconds;
  return q;
}

double QosRequirement::max_delay_s() const {
  if (!max_delay_s_) {
    throw std::logic_error("best-effort flow has no delay bound");
  }
  return *max_delay_s_;
}

std::int64_t DataFlow::buffered_bits() const {
  if (is_full_buffer()) return kInfiniteBacklog;
  std::int64_t bits = 0;
  for (const auto& p : buffer) bits += p.remaining_bits;
  return bits;
}

void ResourceGridConfig::validate() const {
  if (prbs_per_direction <= 0) throw std::invalid_argument("prbs_per_direction must be > 0");
  if (bits_per_prb <= 0) throw std::invalid_argument("bits_per_prb must be > 0");
  if (pdcch_capacity <= 0) throw std::invalid_argument("pdcch_capacity must be > 0");
  if (!(tti_duration_s > 0.0)) throw std::invalid_argument("tti_duration must be > 0");
  if (!(bler >= 0.0 && bler < 1.0)) throw std::invalid_argument("bler must lie in [0, 1)");
}

void TrafficConfig::validate() const {
  if (n_voip_users < 0) throw std::invalid_argument("n_voip must be >= 0");
  if (voip_packet_bits <= 0) throw std::invalid_argument("voip_packet_bits must be > 0");
  if (voip_period_ttis <= 0) throw std::invalid_argument("voip_period_ttis must be > 0");
}

int TtiAllocation::prbs_used(Direction direction) const {
  int total = 0;
  for (const auto& g : data_grants) {
    if (g.direction == direction) total += g.prbs;
  }
  return total;
}

const DataGrant* TtiAllocation::grant_for(FlowId id) const {
  auto it = std::find_if(data_grants.begin(), data_grants.end(),
                         [id](const DataGrant& g) { return g.flow_id == id; });
  return it == data_grants.end() ? nullptr : &*it;
}

bool exceeds_delay_bound(double delay_s, double bound_s) {
  return delay_s > bound_s * (1.0 + 1e-12);
}

}  // namespace qadra::sim
