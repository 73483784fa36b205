// Copyright 2026 The qadra-sched Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <vector>

#include "qadra/common/rng.hpp"
#include "qadra/sim/types.hpp"

namespace qadra::sim {

/// VoIP flows use this delay bound (100 ms).
inline constexpr double kVoipMaxDelayS = 0.1;

/// TTI-loop cell simulator: one optional full-buffer downlink flow plus
/// `n_voip_users` users with one uplink and one downlink VoIP flow each.
///
/// Flow ids: 0 is the full-buffer flow (when enabled); VoIP user u owns
/// uplink flow 1 + 2u and downlink flow 2 + 2u.
///
/// Per TTI the caller runs advance_tti(), orders the returned flows,
/// builds an allocation with fd_schedule() and hands it to transmit().
class Simulator {
 public:
  Simulator(TrafficConfig traffic, ResourceGridConfig grid, std::uint64_t seed);

  /// Moves to the next TTI, injects VoIP arrivals (every voip_period_ttis,
  /// all users in phase) and returns the flows that have data.
  FlowList advance_tti();

  /// Delivers data for every grant. Each grant fails with probability bler;
  /// a failed flow is flagged as a retransmission for the next TTI.
  TtiOutcome transmit(const TtiAllocation& alloc);

  /// Appends the current age of every still-buffered packet to the delay
  /// log. Call once at the end of a run.
  void finalize();

  Tti now() const { return now_; }
  const std::vector<DataFlow>& flows() const { return flows_; }
  const DataFlow& flow(FlowId id) const;
  const ResourceGridConfig& grid() const { return grid_; }
  const TrafficConfig& traffic() const { return traffic_; }
  const MetricsLog& metrics() const { return metrics_; }

  /// Training runs switch the (growing) log off.
  void set_record_metrics(bool on) { record_metrics_ = on; }

 private:
  DataFlow& mutable_flow(FlowId id);
  void deliver(DataFlow& flow, std::int64_t capacity_bits, FlowDelivery& report);

  TrafficConfig traffic_;
  ResourceGridConfig grid_;
  Rng rng_;
  Tti now_ = 0;
  bool transmitted_ = false;
  bool record_metrics_ = true;
  std::vector<DataFlow> flows_;
  std::vector<int> index_of_;  // flow id -> position in flows_
  MetricsLog metrics_;
};

/// QoS predicate for flows with a delay bound: false iff a packet delivered
/// in TTI `now` was late or a still-buffered packet is already older than
/// the bound. Throws std::logic_error for best-effort flows.
bool qos_satisfied(const DataFlow& flow, Tti now, double tti_duration_s);

}  // namespace qadra::sim
