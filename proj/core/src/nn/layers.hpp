// Copyright 2026 The qadra-sched Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <type_traits>

#include <Eigen/Dense>

#include "qadra/nn/arch.hpp"

namespace qadra::nn::detail {

template <typename T>
using MatMap = Eigen::Map<std::conditional_t<std::is_const_v<T>, const Eigen::MatrixXd, Eigen::MatrixXd>>;
template <typename T>
using VecMap = Eigen::Map<std::conditional_t<std::is_const_v<T>, const Eigen::VectorXd, Eigen::VectorXd>>;

template <typename T>
MatMap<T> weight(const DenseLayout& l, std::span<T> p) {
  return MatMap<T>(p.data() + l.weight, l.out, l.in);
}
template <typename T>
VecMap<T> bias(const DenseLayout& l, std::span<T> p) {
  return VecMap<T>(p.data() + l.bias, l.out);
}
template <typename T>
MatMap<T> gru_w(const GruLayout& g, std::span<T> p) {
  return MatMap<T>(p.data() + g.w, 3 * g.hidden, g.in);
}
template <typename T>
MatMap<T> gru_u(const GruLayout& g, std::span<T> p) {
  return MatMap<T>(p.data() + g.u, 3 * g.hidden, g.hidden);
}
template <typename T>
VecMap<T> gru_b(const GruLayout& g, std::span<T> p) {
  return VecMap<T>(p.data() + g.b, 3 * g.hidden);
}

template <typename Derived>
Eigen::VectorXd sigmoid(const Eigen::MatrixBase<Derived>& v) {
  return (1.0 / (1.0 + (-v.array()).exp())).matrix();
}

}  // namespace qadra::nn::detail
