// Copyright 2026 The qadra-sched Authors
// SPDX-License-Identifier: Apache-2.0

#include "qadra/nn/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <string>

namespace qadra::nn {
namespace {

static_assert(std::endian::native == std::endian::little, "checkpoint I/O assumes a little-endian host");

template <typename T>
void put(std::ostream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::istream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw std::runtime_error("checkpoint truncated");
  return v;
}

void put_list(std::ostream& out, const std::vector<int>& xs) {
  put<std::uint32_t>(out, static_cast<std::uint32_t>(xs.size()));
  for (int x : xs) put<std::int32_t>(out, x);
}

std::vector<int> get_list(std::istream& in) {
  const auto n = get<std::uint32_t>(in);
  if (n > 1024) throw std::runtime_error("checkpoint layer list too long");
  std::vector<int> xs(n);
  for (auto& x : xs) x = get<std::int32_t>(in);
  return xs;
}

}  // namespace

void write_checkpoint(std::ostream& out, const Checkpoint& ckpt) {
  if (ckpt.feature_mean.size() != ckpt.feature_std.size()) {
    throw std::invalid_argument("feature mean/std size mismatch");
  }
  const NetworkArch& arch = ckpt.params.arch();
  out.write(kCheckpointMagic, sizeof(kCheckpointMagic));
  put<std::uint32_t>(out, kCheckpointVersion);
  put<std::int32_t>(out, arch.feature_dim);
  put_list(out, arch.encoder.dense);
  put_list(out, arch.encoder.gru);
  put_list(out, arch.q_hidden);
  put<std::uint64_t>(out, ckpt.params.version());
  put<std::uint64_t>(out, ckpt.params.size());
  const auto values = ckpt.params.values();
  out.write(reinterpret_cast<const char*>(values.data()),
            static_cast<std::streamsize>(values.size() * sizeof(double)));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(ckpt.feature_mean.size()));
  for (double m : ckpt.feature_mean) put<double>(out, m);
  for (double s : ckpt.feature_std) put<double>(out, s);
  if (!out) throw std::runtime_error("checkpoint write failed");
}

Checkpoint read_checkpoint(std::istream& in) {
  char magic[sizeof(kCheckpointMagic)];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kCheckpointMagic, sizeof(magic)) != 0) {
    throw std::runtime_error("not a checkpoint file (bad magic)");
  }
  const auto version = get<std::uint32_t>(in);
  if (version != kCheckpointVersion) {
    throw std::runtime_error("unsupported checkpoint version " + std::to_string(version));
  }
  NetworkArch arch;
  arch.feature_dim = get<std::int32_t>(in);
  arch.encoder.dense = get_list(in);
  arch.encoder.gru = get_list(in);
  arch.q_hidden = get_list(in);
  try {
    arch.validate();
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error(std::string("checkpoint architecture invalid: ") + e.what());
  }
  Checkpoint ckpt{ParamSet(arch), {}, {}};
  ckpt.params.set_version(get<std::uint64_t>(in));
  const auto n = get<std::uint64_t>(in);
  if (n != ckpt.params.size()) throw std::runtime_error("checkpoint parameter count mismatch");
  auto values = ckpt.params.values();
  in.read(reinterpret_cast<char*>(values.data()), static_cast<std::streamsize>(n * sizeof(double)));
  if (!in) throw std::runtime_error("checkpoint truncated");
  const auto nf = get<std::uint32_t>(in);
  if (nf > 1024) throw std::runtime_error("checkpoint feature stats too long");
  ckpt.feature_mean.resize(nf);
  ckpt.feature_std.resize(nf);
  for (auto& m : ckpt.feature_mean) m = get<double>(in);
  for (auto& s : ckpt.feature_std) s = get<double>(in);
  return ckpt;
}

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt) {
  const auto tmp = std::filesystem::path(path.string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string());
    write_checkpoint(out, ckpt);
  }
  std::filesystem::rename(tmp, path);
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return read_checkpoint(in);
}

}  // namespace qadra::nn
