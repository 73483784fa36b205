// Copyright 2026 The qadra-sched Authors
// SPDX-License-Identifier: Apache-2.0

// Independent reference computations shared by the unit and acceptance
// suites. Everything here uses plain scalar loops over the flat parameter
// array so that it shares no code with the Eigen implementation.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>
#include <boost/math/distributions/chi_squared.hpp>

#include "qadra/agent/learner.hpp"
#include "qadra/common/rng.hpp"
#include "qadra/nn/params.hpp"
#include "qadra/replay/replay_buffer.hpp"

namespace qadra::testing {

inline std::vector<double> naive_dense(const nn::DenseLayout& l, std::span<const double> p,
                                       const std::vector<double>& x, bool relu) {
  std::vector<double> y(static_cast<std::size_t>(l.out));
  for (int o = 0; o < l.out; ++o) {
    double acc = p[l.bias + static_cast<std::size_t>(o)];
    for (int i = 0; i < l.in; ++i) {
      acc += p[l.weight + static_cast<std::size_t>(i) * l.out + static_cast<std::size_t>(o)] *
             x[static_cast<std::size_t>(i)];
    }
    y[static_cast<std::size_t>(o)] = relu ? std::max(acc, 0.0) : acc;
  }
  return y;
}

inline double naive_sigmoid(double v) { return 1.0 / (1.0 + std::exp(-v)); }

// One GRU cell, gates stacked [z; r; n] in rows, column-major blocks.
inline std::vector<double> naive_gru(const nn::GruLayout& g, std::span<const double> p,
                                     const std::vector<double>& x, const std::vector<double>& h) {
  const auto H = static_cast<std::size_t>(g.hidden);
  const auto rows = 3 * H;
  auto W = [&](std::size_t r, std::size_t c) { return p[g.w + c * rows + r]; };
  auto U = [&](std::size_t r, std::size_t c) { return p[g.u + c * rows + r]; };
  std::vector<double> z(H), r(H), out(H);
  for (std::size_t k = 0; k < H; ++k) {
    double az = p[g.b + k], ar = p[g.b + H + k];
    for (std::size_t i = 0; i < x.size(); ++i) az += W(k, i) * x[i], ar += W(H + k, i) * x[i];
    for (std::size_t j = 0; j < H; ++j) az += U(k, j) * h[j], ar += U(H + k, j) * h[j];
    z[k] = naive_sigmoid(az);
    r[k] = naive_sigmoid(ar);
  }
  for (std::size_t k = 0; k < H; ++k) {
    double an = p[g.b + 2 * H + k];
    for (std::size_t i = 0; i < x.size(); ++i) an += W(2 * H + k, i) * x[i];
    for (std::size_t j = 0; j < H; ++j) an += U(2 * H + k, j) * r[j] * h[j];
    out[k] = (1.0 - z[k]) * h[k] + z[k] * std::tanh(an);
  }
  return out;
}

inline std::vector<double> naive_encode(const nn::EncoderLayout& layout, std::span<const double> p,
                                        const Eigen::MatrixXd& inputs) {
  std::vector<std::vector<double>> h;
  for (const auto& g : layout.gru) h.emplace_back(static_cast<std::size_t>(g.hidden), 0.0);
  for (Eigen::Index t = 0; t < inputs.cols(); ++t) {
    std::vector<double> a(inputs.col(t).data(), inputs.col(t).data() + inputs.rows());
    for (const auto& l : layout.dense) a = naive_dense(l, p, a, true);
    for (std::size_t i = 0; i < layout.gru.size(); ++i) {
      h[i] = naive_gru(layout.gru[i], p, a, h[i]);
      a = h[i];
    }
  }
  return h.back();
}

inline double naive_q(const nn::QNetLayout& layout, std::span<const double> p, std::vector<double> x) {
  for (std::size_t i = 0; i < layout.layers.size(); ++i) {
    x = naive_dense(layout.layers[i], p, x, i + 1 < layout.layers.size());
  }
  return x[0];
}

inline nn::NetworkArch tiny_arch() {
  nn::NetworkArch a;
  a.encoder.dense = {8};
  a.encoder.gru = {4};
  a.q_hidden = {8};
  return a;
}

// Parameters spread wider than Glorot so every ReLU and gate sees a
// non-trivial slope, with biases randomized as well.
inline nn::ParamSet random_params(const nn::NetworkArch& arch, Rng& rng, double scale = 0.6) {
  nn::ParamSet p(arch);
  for (double& v : p.values()) v = scale * (2.0 * rng.uniform() - 1.0);
  return p;
}

inline Eigen::MatrixXd random_features(int d, int n, Rng& rng) {
  Eigen::MatrixXd m(d, n);
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i) m(i, j) = 2.0 * rng.uniform() - 1.0;
  return m;
}

inline replay::SortSequence random_sequence(int d, int n, int n_next, Rng& rng) {
  replay::SortSequence s;
  s.inputs = random_features(d, n, rng);
  for (int k = 0; k < n; ++k) s.actions.push_back(static_cast<int>(rng.index(static_cast<std::size_t>(n - k))));
  s.reward = 2.0 * rng.uniform() - 1.0;
  s.next_inputs = random_features(d, n_next, rng);
  return s;
}

struct GradCheckResult {
  double max_rel_error = 0.0;
  double max_abs_grad = 0.0;
  std::size_t n_params = 0;
};

// Central differences of the full sequence loss against the analytic
// gradient, for every parameter. Relative error uses a denominator floor
// so that parameters with a vanishing gradient are judged absolutely.
inline constexpr double kGradCheckStep = 1e-5;
inline constexpr double kGradCheckFloor = 1e-6;

inline GradCheckResult gradient_check(std::uint64_t seed, agent::TargetMode mode,
                                      agent::DiscountMode discount, double gamma = 0.9,
                                      int length = 3) {
  Rng rng(seed);
  const auto arch = tiny_arch();
  nn::ParamSet online = random_params(arch, rng);
  const nn::ParamSet target = random_params(arch, rng);
  const auto seq = random_sequence(arch.feature_dim, length, 2, rng);
  std::vector<double> grad(online.size(), 0.0);
  agent::sequence_loss(online, target, seq, gamma, mode, 1.0, grad, discount);
  GradCheckResult out;
  out.n_params = online.size();
  for (std::size_t i = 0; i < online.size(); ++i) {
    const double keep = online.values()[i];
    online.values()[i] = keep + kGradCheckStep;
    const double up = agent::sequence_loss(online, target, seq, gamma, mode, 1.0, {}, discount).loss;
    online.values()[i] = keep - kGradCheckStep;
    const double down = agent::sequence_loss(online, target, seq, gamma, mode, 1.0, {}, discount).loss;
    online.values()[i] = keep;
    const double numeric = (up - down) / (2.0 * kGradCheckStep);
    const double denom = std::max({std::abs(grad[i]), std::abs(numeric), kGradCheckFloor});
    out.max_rel_error = std::max(out.max_rel_error, std::abs(grad[i] - numeric) / denom);
    out.max_abs_grad = std::max(out.max_abs_grad, std::abs(grad[i]));
  }
  return out;
}

// Upper-tail p-value of Pearson's statistic against a uniform expectation.
inline double chi_square_uniform_p(const std::vector<std::int64_t>& counts) {
  double total = 0.0;
  for (auto c : counts) total += static_cast<double>(c);
  const double expected = total / static_cast<double>(counts.size());
  double stat = 0.0;
  for (auto c : counts) stat += std::pow(static_cast<double>(c) - expected, 2) / expected;
  const boost::math::chi_squared dist(static_cast<double>(counts.size() - 1));
  return boost::math::cdf(boost::math::complement(dist, stat));
}

}  // namespace qadra::testing
