// Copyright 2026 The qadra-sched Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <unordered_map>

#include "qadra/sim/types.hpp"

namespace qadra::policy {

/// Time-domain scheduler: orders the TTI's flows by decreasing priority.
/// The result is always a permutation of the input.
class TdPolicy {
 public:
  virtual ~TdPolicy() = default;
  virtual sim::FlowList sort(const sim::FlowList& flows, sim::Tti now) = 0;
  /// Feedback after transmission; stateless policies ignore it.
  virtual void on_transmit(const sim::TtiOutcome& /*outcome*/) {}
  virtual std::string name() const = 0;
};

struct SortOptions {
  /// Rank VoIP flows above best-effort ones before applying weights.
  bool voip_first = false;
};

/// Time since last scheduled; never-scheduled flows get +infinity.
double rr_weight(const sim::DataFlow& flow, sim::Tti now);

/// Exponential moving average of delivered bits per TTI, per flow.
class PfState {
 public:
  explicit PfState(double ema_factor = 0.01, double floor_bits = 1.0);

  double average(sim::FlowId id) const;
  void set_average(sim::FlowId id, double bits);
  /// ū ← (1 − a)·ū + a·delivered, floored.
  void update(sim::FlowId id, double delivered_bits);

  double ema_factor() const { return ema_; }
  double floor() const { return floor_; }
  const std::unordered_map<sim::FlowId, double>& averages() const { return avg_; }

 private:
  double ema_;
  double floor_;
  std::unordered_map<sim::FlowId, double> avg_;
};

/// Single-TTI throughput the flow could get with the whole pool:
/// min(buffered bits, prbs_per_direction × bits_per_prb).
double expected_throughput(const sim::DataFlow& flow, const sim::ResourceGridConfig& grid);

double pf_weight(const sim::DataFlow& flow, const PfState& state,
                 const sim::ResourceGridConfig& grid);

/// Sorts by (retransmission first, [VoIP first], weight desc, flow id asc).
sim::FlowList baseline_sort(const sim::FlowList& flows,
                            const std::function<double(const sim::DataFlow&)>& weight,
                            SortOptions options = {});

class RoundRobin final : public TdPolicy {
 public:
  explicit RoundRobin(SortOptions options = {}) : options_(options) {}
  sim::FlowList sort(const sim::FlowList& flows, sim::Tti now) override;
  std::string name() const override { return "round_robin"; }

 private:
  SortOptions options_;
};

class ProportionalFair final : public TdPolicy {
 public:
  ProportionalFair(sim::ResourceGridConfig grid, SortOptions options = {},
                   double ema_factor = 0.01);
  sim::FlowList sort(const sim::FlowList& flows, sim::Tti now) override;
  /// Updates every flow seen so far; unscheduled flows count as 0 bits.
  void on_transmit(const sim::TtiOutcome& outcome) override;
  std::string name() const override { return "proportional_fair"; }
  const PfState& state() const { return state_; }

 private:
  sim::ResourceGridConfig grid_;
  SortOptions options_;
  PfState state_;
};

/// "round_robin" or "proportional_fair"; throws std::invalid_argument otherwise.
std::unique_ptr<TdPolicy> make_baseline(std::string_view name, const sim::ResourceGridConfig& grid,
                                        SortOptions options = {}, double pf_ema = 0.01);

}  // namespace qadra::policy
