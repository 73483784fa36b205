// Copyright 2026 The qadra-sched Authors
// SPDX-License-Identifier: Apache-2.0

#include "qadra/sim/simulator.hpp"

#include <algorithm>
#include <stdexcept>

namespace qadra::sim {

Simulator::Simulator(TrafficConfig traffic, ResourceGridConfig grid, std::uint64_t seed)
    : traffic_(traffic), grid_(grid), rng_(seed) {
  traffic_.validate();
  grid_.validate();

  const int n_ids = 1 + 2 * traffic_.n_voip_users;
  index_of_.assign(static_cast<std::size_t>(n_ids), -1);
  if (traffic_.full_buffer) {
    DataFlow fb;
    fb.flow_id = 0;
    fb.group = TrafficGroup::kFullBuffer;
    fb.direction = Direction::kDownlink;
    fb.qos = QosRequirement::best_effort();
    flows_.push_back(fb);
  }
  for (int u = 0; u < traffic_.n_voip_users; ++u) {
    for (Direction d : {Direction::kUplink, Direction::kDownlink}) {
      DataFlow f;
      f.flow_id = d == Direction::kUplink ? 1 + 2 * u : 2 + 2 * u;
      f.group = TrafficGroup::kVoip;
      f.direction = d;
      f.qos = QosRequirement::max_delay(kVoipMaxDelayS);
      flows_.push_back(f);
    }
  }
  for (std::size_t i = 0; i < flows_.size(); ++i) {
    index_of_[static_cast<std::size_t>(flows_[i].flow_id)] = static_cast<int>(i);
  }
}

const DataFlow& Simulator::flow(FlowId id) const {
  if (id < 0 || static_cast<std::size_t>(id) >= index_of_.size() || index_of_[id] < 0) {
    throw std::out_of_range("unknown flow id");
  }
  return flows_[static_cast<std::size_t>(index_of_[id])];
}

DataFlow& Simulator::mutable_flow(FlowId id) {
  return const_cast<DataFlow&>(static_cast<const Simulator&>(*this).flow(id));
}

FlowList Simulator::advance_tti() {
  ++now_;
  transmitted_ = false;

  const bool arrival = now_ % traffic_.voip_period_ttis == 0;
  FlowList offered;
  for (auto& f : flows_) {
    if (arrival && f.group == TrafficGroup::kVoip) {
      f.buffer.push_back(Packet{traffic_.voip_packet_bits, traffic_.voip_packet_bits, now_, {}});
    }
    const bool data = f.has_data();
    f.is_new_transmission = data && !f.is_retransmission;
    if (!data) f.is_retransmission = false;
    if (data) offered.push_back(&f);
  }
  return offered;
}

void Simulator::deliver(DataFlow& flow, std::int64_t capacity_bits, FlowDelivery& report) {
  if (flow.is_full_buffer()) {
    report.delivered_bits = capacity_bits;
    return;
  }
  std::int64_t left = capacity_bits;
  while (left > 0 && !flow.buffer.empty()) {
    Packet& head = flow.buffer.front();
    const std::int64_t take = std::min(left, head.remaining_bits);
    head.remaining_bits -= take;
    left -= take;
    report.delivered_bits += take;
    if (head.remaining_bits > 0) break;

    head.delivered_at = now_;
    const double delay = static_cast<double>(now_ - head.created_at) * grid_.tti_duration_s;
    if (flow.last_delivery_tti != now_) {
      flow.last_delivery_tti = now_;
      flow.worst_delivered_delay_s = delay;
    } else {
      flow.worst_delivered_delay_s = std::max(flow.worst_delivered_delay_s, delay);
    }
    if (record_metrics_) {
      metrics_.delays.push_back({flow.group, head.created_at, now_, delay});
    }
    flow.buffer.pop_front();
  }
}

TtiOutcome Simulator::transmit(const TtiAllocation& alloc) {
  if (transmitted_) throw std::logic_error("transmit called twice in one TTI");
  transmitted_ = true;

  TtiOutcome out;
  out.tti = now_;
  for (const DataGrant& g : alloc.data_grants) {
    DataFlow& flow = mutable_flow(g.flow_id);
    FlowDelivery report{g.flow_id, g.prbs, 0, false};
    flow.last_scheduled = now_;
    if (rng_.bernoulli(grid_.bler)) {
      flow.is_retransmission = true;
    } else {
      report.success = true;
      flow.is_retransmission = false;
      deliver(flow, g.prbs * grid_.bits_per_prb, report);
    }
    if (flow.is_uplink()) {
      out.ul_bits += report.delivered_bits;
    } else {
      out.dl_bits += report.delivered_bits;
    }
    if (flow.is_full_buffer()) out.full_buffer_bits += report.delivered_bits;
    out.deliveries.push_back(report);
  }
  out.n_scheduled = static_cast<int>(alloc.data_grants.size());

  for (const auto& f : flows_) {
    if (!f.qos.has_max_delay()) continue;
    ++out.n_voip_flows;
    if (!qos_satisfied(f, now_, grid_.tti_duration_s)) ++out.voip_violations;
  }

  if (record_metrics_) {
    metrics_.ttis.push_back(
        {now_, out.dl_bits, out.ul_bits, out.n_scheduled, out.full_buffer_bits, out.voip_violations});
  }
  return out;
}

void Simulator::finalize() {
  if (!record_metrics_) return;
  for (const auto& f : flows_) {
    for (const auto& p : f.buffer) {
      const double age = static_cast<double>(now_ - p.created_at) * grid_.tti_duration_s;
      metrics_.delays.push_back({f.group, p.created_at, std::nullopt, age});
    }
  }
}

bool qos_satisfied(const DataFlow& flow, Tti now, double tti_duration_s) {
  const double bound = flow.qos.max_delay_s();
  if (flow.last_delivery_tti == now && exceeds_delay_bound(flow.worst_delivered_delay_s, bound)) {
    return false;
  }
  if (!flow.buffer.empty()) {
    const double age = static_cast<double>(now - flow.buffer.front().created_at) * tti_duration_s;
    if (exceeds_delay_bound(age, bound)) return false;
  }
  return true;
}

}  // namespace qadra::sim
