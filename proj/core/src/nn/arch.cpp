// Copyright 2026 The qadra-sched Authors
// SPDX-License-Identifier: Apache-2.0

#include "qadra/nn/arch.hpp"

#include <sstream>
#include <stdexcept>

namespace qadra::nn {

void NetworkArch::validate() const {
  if (feature_dim <= 0) throw std::invalid_argument("feature_dim must be positive");
  if (encoder.gru.empty()) throw std::invalid_argument("encoder needs at least one GRU layer");
  for (int d : encoder.dense) {
    if (d <= 0) throw std::invalid_argument("dense layer sizes must be positive");
  }
  for (int d : encoder.gru) {
    if (d <= 0) throw std::invalid_argument("GRU state sizes must be positive");
  }
  for (int d : q_hidden) {
    if (d <= 0) throw std::invalid_argument("Q-network layer sizes must be positive");
  }
}

std::string NetworkArch::describe() const {
  std::ostringstream os;
  auto list = [&](const std::vector<int>& v) {
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "x" : "") << v[i];
  };
  os << "encoder " << feature_dim;
  for (int d : encoder.dense) os << "x" << d;
  os << " + GRU ";
  list(encoder.gru);
  os << "; qnet " << q_input_dim();
  for (int d : q_hidden) os << "x" << d;
  os << "x1";
  return os.str();
}

namespace {

DenseLayout place_dense(int in, int out, std::size_t& cursor) {
  DenseLayout l{in, out, cursor, cursor + static_cast<std::size_t>(in) * out};
  cursor += l.size();
  return l;
}

EncoderLayout place_encoder(const NetworkArch& arch, std::size_t& cursor) {
  EncoderLayout e;
  e.input_dim = arch.feature_dim;
  e.begin = cursor;
  int in = arch.feature_dim;
  for (int d : arch.encoder.dense) {
    e.dense.push_back(place_dense(in, d, cursor));
    in = d;
  }
  for (int h : arch.encoder.gru) {
    GruLayout g;
    g.in = in;
    g.hidden = h;
    g.w = cursor;
    g.u = g.w + 3 * static_cast<std::size_t>(h) * in;
    g.b = g.u + 3 * static_cast<std::size_t>(h) * h;
    cursor += g.size();
    e.gru.push_back(g);
    in = h;
  }
  e.end = cursor;
  return e;
}

}  // namespace

NetworkLayout::NetworkLayout(const NetworkArch& a) : arch(a) {
  arch.validate();
  std::size_t cursor = 0;
  input_encoder = place_encoder(arch, cursor);
  output_encoder = place_encoder(arch, cursor);
  qnet.begin = cursor;
  int in = arch.q_input_dim();
  for (int d : arch.q_hidden) {
    qnet.layers.push_back(place_dense(in, d, cursor));
    in = d;
  }
  qnet.layers.push_back(place_dense(in, 1, cursor));
  qnet.end = cursor;
  total = cursor;
}

}  // namespace qadra::nn
