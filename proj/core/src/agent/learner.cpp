// Copyright 2026 The qadra-sched Authors
// SPDX-License-Identifier: Apache-2.0

#include "qadra/agent/learner.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "qadra/agent/actor.hpp"
#include "qadra/nn/encoder.hpp"
#include "qadra/nn/qnet.hpp"

namespace qadra::agent {
namespace {

// Per-step bootstrap values for a batch of (state, candidate set) pairs.
// `inputs` stacks every candidate of every step; `offsets` delimits steps.
std::vector<double> bootstraps(const nn::ParamSet& online, const nn::ParamSet& target,
                               const Eigen::MatrixXd& inputs, const std::vector<Eigen::Index>& offsets,
                               TargetMode mode) {
  std::vector<double> out(offsets.size() - 1, 0.0);
  if (inputs.cols() == 0) return out;
  const Eigen::RowVectorXd q_t = nn::q_forward(target.layout().qnet, target.values(), inputs);
  Eigen::RowVectorXd q_o;
  if (mode == TargetMode::kDouble) q_o = nn::q_forward(online.layout().qnet, online.values(), inputs);
  for (std::size_t s = 0; s + 1 < offsets.size(); ++s) {
    const Eigen::Index b = offsets[s], m = offsets[s + 1] - offsets[s];
    if (m == 0) continue;
    if (mode == TargetMode::kVanilla) {
      out[s] = q_t.segment(b, m).maxCoeff();
    } else {
      out[s] = q_t(b + argmax_first(q_o.segment(b, m)));
    }
  }
  return out;
}

}  // namespace

double dqn_target(const nn::ParamSet& online, const nn::ParamSet& target,
                  const Eigen::VectorXd& s_in, const Eigen::VectorXd& s_out,
                  const Eigen::MatrixXd& candidates, TargetMode mode) {
  if (candidates.cols() == 0) return 0.0;
  return bootstraps(online, target, nn::q_inputs(s_in, s_out, candidates), {0, candidates.cols()}, mode)[0];
}

double SequenceLoss::mean_abs_td() const {
  if (td.empty()) return 0.0;
  double s = 0.0;
  for (double d : td) s += std::abs(d);
  return s / static_cast<double>(td.size());
}

SequenceLoss sequence_loss(const nn::ParamSet& online, const nn::ParamSet& target,
                           const replay::SortSequence& seq, double gamma, TargetMode mode,
                           double weight, std::span<double> grad, DiscountMode discount) {
  const auto& L = online.layout();
  const auto p = online.values();
  const auto pt = target.values();
  const Eigen::Index n = seq.inputs.cols();
  const Eigen::Index d = seq.inputs.rows();
  const int sd = L.arch.state_dim();
  if (n == 0) throw std::invalid_argument("empty sequence");
  if (!grad.empty() && grad.size() != online.size()) throw std::invalid_argument("gradient buffer has wrong size");

  // Replay the selection sort to recover the output list and remaining sets.
  Eigen::MatrixXd chosen(d, n);
  std::vector<std::vector<int>> remaining_after(static_cast<std::size_t>(n));
  {
    std::vector<int> rem(static_cast<std::size_t>(n));
    std::iota(rem.begin(), rem.end(), 0);
    for (Eigen::Index k = 0; k < n; ++k) {
      const int a = seq.actions[static_cast<std::size_t>(k)];
      if (a < 0 || a >= static_cast<int>(rem.size())) throw std::out_of_range("action outside remaining list");
      chosen.col(k) = seq.inputs.col(rem[static_cast<std::size_t>(a)]);
      rem.erase(rem.begin() + a);
      remaining_after[static_cast<std::size_t>(k)] = rem;
    }
  }
  const Eigen::MatrixXd prefix = chosen.leftCols(n - 1);  // output encoder inputs

  // Targets.
  const Eigen::VectorXd s_in_t = nn::encode_sequence(L.input_encoder, pt, seq.inputs);
  nn::EncoderTape out_t(L.output_encoder, pt);
  out_t.forward(chosen.leftCols(n - 1));
  Eigen::Index total = 0;
  for (Eigen::Index k = 0; k + 1 < n; ++k) total += static_cast<Eigen::Index>(remaining_after[static_cast<std::size_t>(k)].size());
  total += seq.next_inputs.cols();
  Eigen::MatrixXd boot_in(L.arch.q_input_dim(), total);
  std::vector<Eigen::Index> offsets{0};
  Eigen::Index c = 0;
  for (Eigen::Index k = 0; k + 1 < n; ++k) {
    for (int j : remaining_after[static_cast<std::size_t>(k)]) {
      boot_in.col(c).head(sd) = s_in_t;
      boot_in.col(c).segment(sd, sd) = out_t.outputs().col(k);
      boot_in.col(c).tail(d) = seq.inputs.col(j);
      ++c;
    }
    offsets.push_back(c);
  }
  if (seq.next_inputs.cols() > 0) {
    const Eigen::VectorXd s_next = nn::encode_sequence(L.input_encoder, pt, seq.next_inputs);
    for (Eigen::Index j = 0; j < seq.next_inputs.cols(); ++j) {
      boot_in.col(c).head(sd) = s_next;
      boot_in.col(c).segment(sd, sd).setZero();
      boot_in.col(c).tail(d) = seq.next_inputs.col(j);
      ++c;
    }
  }
  offsets.push_back(c);
  const std::vector<double> boot = bootstraps(online, target, boot_in, offsets, mode);

  // Online predictions Q(s_k, x_{a_k}).
  nn::EncoderTape in_tape(L.input_encoder, p);
  in_tape.forward(seq.inputs);
  const Eigen::VectorXd s_in = in_tape.final_output();
  nn::EncoderTape out_tape(L.output_encoder, p);
  out_tape.forward(prefix);
  Eigen::MatrixXd q_in(L.arch.q_input_dim(), n);
  for (Eigen::Index k = 0; k < n; ++k) {
    q_in.col(k).head(sd) = s_in;
    if (k == 0) {
      q_in.col(k).segment(sd, sd).setZero();
    } else {
      q_in.col(k).segment(sd, sd) = out_tape.outputs().col(k - 1);
    }
    q_in.col(k).tail(d) = chosen.col(k);
  }
  nn::QNetTape q_tape(L.qnet, p);
  const Eigen::RowVectorXd q = q_tape.forward(q_in);

  SequenceLoss result;
  result.td.resize(static_cast<std::size_t>(n));
  Eigen::RowVectorXd d_q(n);
  const double inv_n = 1.0 / static_cast<double>(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const auto ks = static_cast<std::size_t>(k);
    const bool last = k + 1 == n;
    const double g = last || discount == DiscountMode::kPerStep ? gamma : 1.0;
    const double y = (last ? seq.reward : 0.0) + g * boot[ks];
    const double delta = y - q(k);
    result.td[ks] = delta;
    result.loss += 0.5 * delta * delta * inv_n;
    d_q(k) = -delta * inv_n * weight;
  }
  if (grad.empty()) return result;

  Eigen::MatrixXd d_in;
  q_tape.backward(d_q, grad, &d_in);
  Eigen::MatrixXd d_s_in = Eigen::MatrixXd::Zero(sd, n);
  d_s_in.col(n - 1) = d_in.topRows(sd).rowwise().sum();
  in_tape.backward(d_s_in, grad);
  if (n > 1) out_tape.backward(d_in.middleRows(sd, sd).rightCols(n - 1), grad);
  return result;
}

void LearnerConfig::validate() const {
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw std::invalid_argument("gamma must lie in [0, 1]");
  if (batch_size == 0) throw std::invalid_argument("batch_size must be > 0");
  if (target_period <= 0) throw std::invalid_argument("target_period must be > 0");
  if (beta_steps <= 0) throw std::invalid_argument("beta_steps must be > 0");
  if (!(beta_start >= 0.0 && beta_end >= 0.0)) throw std::invalid_argument("beta must be >= 0");
  adam.validate();
}

double LearnerConfig::beta_at(std::int64_t step) const {
  const double f = std::clamp(static_cast<double>(step) / static_cast<double>(beta_steps), 0.0, 1.0);
  return beta_start + (beta_end - beta_start) * f;
}

Learner::Learner(LearnerConfig config, nn::ParamSet initial, mdp::FeatureStats stats)
    : config_((config.validate(), config)),
      online_(std::move(initial)),
      target_(online_),
      adam_(config_.adam, online_.size()),
      stats_(std::move(stats)),
      grad_(online_.size(), 0.0) {
  if (!stats_.finalized()) throw std::invalid_argument("learner needs frozen feature statistics");
}

LearnerStepStats Learner::step(replay::ReplayBuffer& buffer, Rng& rng) {
  LearnerStepStats out;
  out.beta = config_.beta_at(steps_);
  const auto batch = buffer.sample(config_.batch_size, out.beta, rng);
  std::fill(grad_.begin(), grad_.end(), 0.0);
  const double inv_b = 1.0 / static_cast<double>(batch.sequences.size());
  std::vector<double> priorities(batch.sequences.size());
  for (std::size_t b = 0; b < batch.sequences.size(); ++b) {
    replay::SortSequence seq = *batch.sequences[b];
    seq.inputs = normalize_columns(seq.inputs, stats_);
    if (seq.next_inputs.cols() > 0) seq.next_inputs = normalize_columns(seq.next_inputs, stats_);
    const auto r = sequence_loss(online_, target_, seq, config_.gamma, config_.target_mode,
                                 batch.weights[b] * inv_b, grad_, config_.discount);
    out.loss += batch.weights[b] * r.loss * inv_b;
    priorities[b] = r.mean_abs_td();
    out.mean_abs_td += priorities[b] * inv_b;
  }
  if (!std::isfinite(out.loss)) throw std::runtime_error("non-finite loss at learner step " + std::to_string(steps_ + 1));
  adam_.step(online_, grad_);
  for (std::size_t b = 0; b < priorities.size(); ++b) buffer.update_priority(batch.handles[b], priorities[b]);
  ++steps_;
  if (steps_ % config_.target_period == 0) {
    std::copy(online_.values().begin(), online_.values().end(), target_.values().begin());
  }
  out.step = steps_;
  return out;
}

std::shared_ptr<const nn::ParamSet> Learner::snapshot() const {
  return std::make_shared<const nn::ParamSet>(online_);
}

}  // namespace qadra::agent
