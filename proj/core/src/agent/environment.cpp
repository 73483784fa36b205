// Copyright 2026 The qadra-sched Authors
// SPDX-License-Identifier: Apache-2.0

#include "qadra/agent/environment.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "qadra/mdp/features.hpp"
#include "qadra/sim/fd_scheduler.hpp"

namespace qadra::agent {

SchedulerEnvironment::SchedulerEnvironment(SchedulerEnvConfig config, std::uint64_t seed)
    : config_(std::move(config)), sim_(config_.traffic, config_.grid, seed) {
  if (config_.preference.size() != mdp::RewardVector::kGroups) {
    throw std::invalid_argument("preference needs one weight per flow group");
  }
}

Eigen::MatrixXd flow_feature_matrix(const sim::FlowList& flows, sim::Tti now, double saturation_bits) {
  Eigen::MatrixXd x(static_cast<Eigen::Index>(mdp::kFeatureDim), static_cast<Eigen::Index>(flows.size()));
  for (std::size_t j = 0; j < flows.size(); ++j) {
    const auto f = mdp::extract_features(*flows[j], now, saturation_bits);
    x.col(static_cast<Eigen::Index>(j)) = Eigen::Map<const Eigen::VectorXd>(f.data(), static_cast<Eigen::Index>(f.size()));
  }
  return x;
}

Eigen::MatrixXd SchedulerEnvironment::observe() {
  flows_ = sim_.advance_tti();
  return flow_feature_matrix(flows_, sim_.now(), config_.saturation_bits);
}

double SchedulerEnvironment::act(const std::vector<int>& order) {
  if (order.size() != flows_.size()) throw std::invalid_argument("ordering does not cover the observed list");
  sim::FlowList sorted;
  sorted.reserve(order.size());
  for (int i : order) sorted.push_back(flows_.at(static_cast<std::size_t>(i)));
  const auto alloc = sim::fd_schedule(sorted, sim_.grid());
  last_outcome_ = sim_.transmit(alloc);
  return mdp::scalarize(mdp::compute_reward_vector(last_outcome_), config_.preference, config_.scales);
}

int inversion_count(std::span<const double> values) {
  int inv = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    for (std::size_t j = i + 1; j < values.size(); ++j) {
      if (values[i] > values[j]) ++inv;
    }
  }
  return inv;
}

ToySortEnvironment::ToySortEnvironment(int list_size, int max_value, std::uint64_t seed)
    : list_size_(list_size), max_value_(max_value), rng_(seed) {
  if (list_size <= 0) throw std::invalid_argument("toy list size must be > 0");
  if (max_value < list_size) throw std::invalid_argument("toy value range too small for distinct values");
}

Eigen::MatrixXd ToySortEnvironment::draw_list(int list_size, int max_value, Rng& rng) {
  std::vector<int> values;
  while (static_cast<int>(values.size()) < list_size) {
    const int v = static_cast<int>(rng.index(static_cast<std::size_t>(max_value)));
    if (std::find(values.begin(), values.end(), v) == values.end()) values.push_back(v);
  }
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(mdp::kFeatureDim), list_size);
  for (int j = 0; j < list_size; ++j) x(0, j) = values[static_cast<std::size_t>(j)];
  return x;
}

Eigen::MatrixXd ToySortEnvironment::observe() {
  current_ = draw_list(list_size_, max_value_, rng_);
  return current_;
}

double ToySortEnvironment::act(const std::vector<int>& order) {
  if (static_cast<Eigen::Index>(order.size()) != current_.cols()) {
    throw std::invalid_argument("ordering does not cover the observed list");
  }
  std::vector<double> values;
  values.reserve(order.size());
  for (int i : order) values.push_back(current_(0, i));
  return -static_cast<double>(inversion_count(values));
}

}  // namespace qadra::agent
