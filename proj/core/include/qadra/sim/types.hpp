// Copyright 2026 The qadra-sched Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace qadra::sim {

using Tti = std::int64_t;
using FlowId = int;

enum class TrafficGroup : int { kFullBuffer = 0, kVoip = 1 };
enum class Direction : int { kUplink = 0, kDownlink = 1 };

std::string_view to_string(TrafficGroup group);
std::string_view to_string(Direction direction);

/// Per-flow QoS requirement: either best effort or a hard packet-delay bound.
class QosRequirement {
 public:
  static QosRequirement best_effort() { return QosRequirement{}; }
  /// Throws std::invalid_argument unless seconds > 0.
  static QosRequirement max_delay(double seconds);

  bool has_max_delay() const { return max_delay_s_.has_value(); }
  /// Throws std::logic_error for best-effort requirements.
  double max_delay_s() const;

 private:
  std::optional<double> max_delay_s_;
};

struct Packet {
  std::int64_t size_bits = 0;
  std::int64_t remaining_bits = 0;
  Tti created_at = 0;
  std::optional<Tti> delivered_at;
};

/// One schedulable radio flow. Full-buffer flows carry no packets; their
/// backlog is infinite.
struct DataFlow {
  FlowId flow_id = 0;
  TrafficGroup group = TrafficGroup::kFullBuffer;
  Direction direction = Direction::kDownlink;
  QosRequirement qos;
  std::deque<Packet> buffer;
  std::optional<Tti> last_scheduled;
  bool is_new_transmission = false;
  bool is_retransmission = false;

  // Delivery bookkeeping for the most recent transmission.
  Tti last_delivery_tti = -1;
  double worst_delivered_delay_s = 0.0;

  bool is_full_buffer() const { return group == TrafficGroup::kFullBuffer; }
  bool is_uplink() const { return direction == Direction::kUplink; }
  bool has_data() const { return is_full_buffer() || !buffer.empty(); }
  /// Remaining buffered bits; kInfiniteBacklog for full-buffer flows.
  std::int64_t buffered_bits() const;

  static constexpr std::int64_t kInfiniteBacklog = INT64_MAX / 4;
};

/// Abstract PHY: constant spectral efficiency per PRB, independent UL/DL
/// PRB pools (FDD) and one shared control-channel grant counter.
struct ResourceGridConfig {
  int prbs_per_direction = 24;
  std::int64_t bits_per_prb = 672;
  int pdcch_capacity = 8;
  double tti_duration_s = 0.0005;
  double bler = 0.01;

  /// Throws std::invalid_argument on non-positive counts or bler outside [0,1).
  void validate() const;
  std::int64_t max_grant_bits() const { return prbs_per_direction * bits_per_prb; }
};

struct DataGrant {
  FlowId flow_id = 0;
  Direction direction = Direction::kDownlink;
  int prbs = 0;
};

/// Result of one frequency-domain pass.
struct TtiAllocation {
  std::vector<FlowId> control_grants;  // priority order, after deletions
  std::vector<DataGrant> data_grants;  // priority order
  std::vector<FlowId> deleted_control; // granted control but no data PRBs

  int prbs_used(Direction direction) const;
  const DataGrant* grant_for(FlowId id) const;
  bool empty() const { return control_grants.empty(); }
};

struct TrafficConfig {
  int n_voip_users = 10;
  bool full_buffer = true;
  std::int64_t voip_packet_bits = 320;
  Tti voip_period_ttis = 40;

  void validate() const;
};

struct FlowDelivery {
  FlowId flow_id = 0;
  int granted_prbs = 0;
  std::int64_t delivered_bits = 0;
  bool success = false;
};

/// Everything observable about one transmitted TTI.
struct TtiOutcome {
  Tti tti = 0;
  std::int64_t dl_bits = 0;
  std::int64_t ul_bits = 0;
  std::int64_t full_buffer_bits = 0;
  int n_scheduled = 0;
  int n_voip_flows = 0;
  int voip_violations = 0;
  std::vector<FlowDelivery> deliveries;
};

struct TtiRecord {
  Tti tti = 0;
  std::int64_t dl_bits = 0;
  std::int64_t ul_bits = 0;
  int n_scheduled = 0;
  std::int64_t full_buffer_bits = 0;
  int voip_violations = 0;
};

struct DelayRecord {
  TrafficGroup group = TrafficGroup::kVoip;
  Tti created_tti = 0;
  std::optional<Tti> delivered_tti;  // empty: still buffered at run end
  double delay_s = 0.0;
};

struct MetricsLog {
  std::vector<TtiRecord> ttis;
  std::vector<DelayRecord> delays;
};

/// Non-owning view of the flows offered to the scheduler in one TTI. The
/// pointers stay valid for the lifetime of the owning simulator.
using FlowList = std::vector<const DataFlow*>;

/// Strictly greater than the bound, with a relative guard against the
/// rounding of tti * duration products.
bool exceeds_delay_bound(double delay_s, double bound_s);

}  // namespace qadra::sim
