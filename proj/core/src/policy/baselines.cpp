// Copyright 2026 The qadra-sched Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <tuple>

#include "qadra/policy/td_policy.hpp"

namespace qadra::policy {

double rr_weight(const sim::DataFlow& flow, sim::Tti now) {
  if (!flow.last_scheduled) return std::numeric_limits<double>::infinity();
  return static_cast<double>(now - *flow.last_scheduled);
}

PfState::PfState(double ema_factor, double floor_bits) : ema_(ema_factor), floor_(floor_bits) {
  if (!(ema_factor > 0.0 && ema_factor <= 1.0)) {
    throw std::invalid_argument("pf ema factor must lie in (0, 1]");
  }
  if (!(floor_bits > 0.0)) throw std::invalid_argument("pf floor must be positive");
}

double PfState::average(sim::FlowId id) const {
  auto it = avg_.find(id);
  return it == avg_.end() ? floor_ : it->second;
}

void PfState::set_average(sim::FlowId id, double bits) { avg_[id] = std::max(bits, floor_); }

void PfState::update(sim::FlowId id, double delivered_bits) {
  const double prev = average(id);
  avg_[id] = std::max((1.0 - ema_) * prev + ema_ * delivered_bits, floor_);
}

double expected_throughput(const sim::DataFlow& flow, const sim::ResourceGridConfig& grid) {
  return static_cast<double>(std::min(flow.buffered_bits(), grid.max_grant_bits()));
}

double pf_weight(const sim::DataFlow& flow, const PfState& state,
                 const sim::ResourceGridConfig& grid) {
  return expected_throughput(flow, grid) / state.average(flow.flow_id);
}

sim::FlowList baseline_sort(const sim::FlowList& flows,
                            const std::function<double(const sim::DataFlow&)>& weight,
                            SortOptions options) {
  struct Keyed {
    const sim::DataFlow* flow;
    double w;
  };
  std::vector<Keyed> keyed;
  keyed.reserve(flows.size());
  for (const auto* f : flows) keyed.push_back({f, weight(*f)});

  auto key = [&](const Keyed& k) {
    const bool voip = options.voip_first && k.flow->group == sim::TrafficGroup::kVoip;
    // Descending on the first three components, ascending on the id.
    return std::make_tuple(!k.flow->is_retransmission, !voip, -k.w, k.flow->flow_id);
  };
  std::sort(keyed.begin(), keyed.end(),
            [&](const Keyed& a, const Keyed& b) { return key(a) < key(b); });

  sim::FlowList out;
  out.reserve(keyed.size());
  for (const auto& k : keyed) out.push_back(k.flow);
  return out;
}

sim::FlowList RoundRobin::sort(const sim::FlowList& flows, sim::Tti now) {
  return baseline_sort(flows, [now](const sim::DataFlow& f) { return rr_weight(f, now); },
                       options_);
}

ProportionalFair::ProportionalFair(sim::ResourceGridConfig grid, SortOptions options,
                                   double ema_factor)
    : grid_(grid), options_(options), state_(ema_factor) {}

sim::FlowList ProportionalFair::sort(const sim::FlowList& flows, sim::Tti /*now*/) {
  for (const auto* f : flows) {
    if (!state_.averages().count(f->flow_id)) state_.set_average(f->flow_id, state_.floor());
  }
  return baseline_sort(
      flows, [this](const sim::DataFlow& f) { return pf_weight(f, state_, grid_); }, options_);
}

void ProportionalFair::on_transmit(const sim::TtiOutcome& outcome) {
  std::unordered_map<sim::FlowId, double> delivered;
  for (const auto& d : outcome.deliveries) delivered[d.flow_id] += static_cast<double>(d.delivered_bits);
  for (const auto& d : outcome.deliveries) {
    if (!state_.averages().count(d.flow_id)) state_.set_average(d.flow_id, state_.floor());
  }
  // Snapshot ids first; update() mutates the map.
  std::vector<sim::FlowId> ids;
  for (const auto& [id, _] : state_.averages()) ids.push_back(id);
  std::sort(ids.begin(), ids.end());
  for (sim::FlowId id : ids) {
    auto it = delivered.find(id);
    state_.update(id, it == delivered.end() ? 0.0 : it->second);
  }
}

std::unique_ptr<TdPolicy> make_baseline(std::string_view name, const sim::ResourceGridConfig& grid,
                                        SortOptions options, double pf_ema) {
  if (name == "round_robin") return std::make_unique<RoundRobin>(options);
  if (name == "proportional_fair") return std::make_unique<ProportionalFair>(grid, options, pf_ema);
  throw std::invalid_argument("unknown baseline policy: " + std::string(name));
}

}  // namespace qadra::policy
