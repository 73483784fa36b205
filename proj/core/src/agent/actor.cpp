// Copyright 2026 The qadra-sched Authors
// SPDX-License-Identifier: Apache-2.0

#include "qadra/agent/actor.hpp"

#include <numeric>
#include <stdexcept>

#include "qadra/nn/encoder.hpp"
#include "qadra/nn/qnet.hpp"

namespace qadra::agent {

int argmax_first(const Eigen::RowVectorXd& q) {
  int best = 0;
  for (Eigen::Index j = 1; j < q.size(); ++j) {
    if (q(j) > q(best)) best = static_cast<int>(j);
  }
  return best;
}

Eigen::MatrixXd normalize_columns(const Eigen::MatrixXd& raw, const mdp::FeatureStats& stats) {
  if (!stats.finalized()) throw std::logic_error("feature statistics are not finalized");
  if (raw.rows() != static_cast<Eigen::Index>(mdp::kFeatureDim)) throw std::invalid_argument("feature list has wrong dimension");
  Eigen::MatrixXd out(raw.rows(), raw.cols());
  for (Eigen::Index i = 0; i < raw.rows(); ++i) {
    const auto k = static_cast<std::size_t>(i);
    out.row(i) = (raw.row(i).array() - stats.mean()[k]) / stats.stddev()[k];
  }
  return out;
}

SortDecision actor_sort(const nn::ParamSet* params, const Eigen::MatrixXd& features,
                        double epsilon, Rng& rng) {
  const int n = static_cast<int>(features.cols());
  SortDecision d;
  d.order.reserve(static_cast<std::size_t>(n));
  d.actions.reserve(static_cast<std::size_t>(n));
  std::vector<int> remaining(static_cast<std::size_t>(n));
  std::iota(remaining.begin(), remaining.end(), 0);

  // Network state is built lazily so that fully random sorts never touch
  // the networks.
  Eigen::VectorXd s_in;
  nn::EncoderState out_state;
  std::size_t encoded = 0;  // elements of d.order fed to the output encoder

  for (int k = 0; k < n; ++k) {
    const int m = n - k;
    int a = 0;
    if (m > 1) {
      const bool explore = epsilon >= 1.0 || (epsilon > 0.0 && rng.uniform() < epsilon);
      if (explore) {
        a = static_cast<int>(rng.index(static_cast<std::size_t>(m)));
      } else {
        if (params == nullptr) throw std::invalid_argument("greedy action needs parameters");
        const auto& layout = params->layout();
        const auto p = params->values();
        if (s_in.size() == 0) {
          s_in = nn::encode_sequence(layout.input_encoder, p, features);
          out_state = nn::EncoderState::zeros(layout.output_encoder);
        }
        for (; encoded < d.order.size(); ++encoded) {
          nn::encoder_step(layout.output_encoder, p, features.col(d.order[encoded]), out_state);
        }
        Eigen::MatrixXd cand(features.rows(), m);
        for (int j = 0; j < m; ++j) cand.col(j) = features.col(remaining[static_cast<std::size_t>(j)]);
        a = argmax_first(nn::q_forward(layout.qnet, p, nn::q_inputs(s_in, out_state.output(), cand)));
      }
    }
    d.actions.push_back(a);
    d.order.push_back(remaining[static_cast<std::size_t>(a)]);
    remaining.erase(remaining.begin() + a);
  }
  return d;
}

Actor::Actor(std::unique_ptr<Environment> env, std::uint64_t seed)
    : env_(std::move(env)), rng_(seed) {
  if (!env_) throw std::invalid_argument("actor needs an environment");
}

std::optional<replay::SortSequence> Actor::step(const nn::ParamSet* params,
                                                const mdp::FeatureStats* stats, double epsilon) {
  ++steps_;
  Eigen::MatrixXd raw = env_->observe();
  std::optional<replay::SortSequence> done;
  if (pending_) {
    pending_->next_inputs = raw;
    done = std::move(pending_);
    pending_.reset();
  }
  if (raw.cols() == 0) {
    env_->act({});
    return done;
  }
  SortDecision d;
  if (epsilon >= 1.0 || raw.cols() == 1) {
    d = actor_sort(nullptr, raw, 1.0, rng_);
  } else {
    if (stats == nullptr) throw std::invalid_argument("greedy sorting needs feature statistics");
    d = actor_sort(params, normalize_columns(raw, *stats), epsilon, rng_);
  }
  replay::SortSequence seq;
  seq.reward = env_->act(d.order);
  seq.actions = std::move(d.actions);
  seq.inputs = std::move(raw);
  if (env_->episodic()) {
    seq.next_inputs.resize(seq.inputs.rows(), 0);
    // Only one sequence can be outstanding; episodic steps never leave one.
    return seq;
  }
  pending_ = std::move(seq);
  return done;
}

}  // namespace qadra::agent
