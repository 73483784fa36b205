// Copyright 2026 The qadra-sched Authors
// SPDX-License-Identifier: Apache-2.0

#include "qadra/harness/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>

#include <boost/algorithm/string/trim.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

namespace qadra::harness {
namespace {

std::string fmt_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double parse_double(const std::string& s) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    throw std::invalid_argument("not a number: '" + s + "'");
  }
  if (pos != s.size() || !std::isfinite(v)) throw std::invalid_argument("not a finite number: '" + s + "'");
  return v;
}

template <typename Int>
Int parse_int(const std::string& s) {
  Int v{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw std::invalid_argument("not an integer: '" + s + "'");
  return v;
}

bool parse_bool(const std::string& s) {
  if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return false;
  throw std::invalid_argument("not a boolean: '" + s + "'");
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, ',')) {
    boost::algorithm::trim(item);
    if (item.empty()) throw std::invalid_argument("empty list element in '" + s + "'");
    out.push_back(item);
  }
  return out;
}

struct Field {
  std::function<void(ExperimentConfig&, const std::string&)> set;
  std::function<std::string(const ExperimentConfig&)> get;
};

// Ordered so that serialization groups keys by section in a fixed order.
using FieldTable = std::vector<std::pair<std::string, std::vector<std::pair<std::string, Field>>>>;

template <typename T>
Field make_field(T ExperimentConfig::*section_ptr, auto T::*member) {
  using V = std::remove_reference_t<decltype(std::declval<T&>().*member)>;
  Field f;
  f.set = [=](ExperimentConfig& c, const std::string& s) {
    V& ref = (c.*section_ptr).*member;
    if constexpr (std::is_same_v<V, bool>) {
      ref = parse_bool(s);
    } else if constexpr (std::is_same_v<V, double>) {
      ref = parse_double(s);
    } else if constexpr (std::is_integral_v<V>) {
      ref = parse_int<V>(s);
    } else if constexpr (std::is_same_v<V, std::string>) {
      ref = s;
    } else if constexpr (std::is_same_v<V, std::vector<double>>) {
      ref.clear();
      for (const auto& e : split_list(s)) ref.push_back(parse_double(e));
    } else {
      static_assert(std::is_same_v<V, std::vector<int>>);
      ref.clear();
      for (const auto& e : split_list(s)) ref.push_back(parse_int<int>(e));
    }
  };
  f.get = [=](const ExperimentConfig& c) -> std::string {
    const V& ref = (c.*section_ptr).*member;
    if constexpr (std::is_same_v<V, bool>) {
      return ref ? "true" : "false";
    } else if constexpr (std::is_same_v<V, double>) {
      return fmt_double(ref);
    } else if constexpr (std::is_integral_v<V>) {
      return std::to_string(ref);
    } else if constexpr (std::is_same_v<V, std::string>) {
      return ref;
    } else {
      std::string out;
      for (std::size_t i = 0; i < ref.size(); ++i) {
        if (i > 0) out += ", ";
        if constexpr (std::is_same_v<V, std::vector<double>>) {
          out += fmt_double(ref[i]);
        } else {
          out += std::to_string(ref[i]);
        }
      }
      return out;
    }
  };
  return f;
}

Field saturation_field() {
  Field f;
  f.set = [](ExperimentConfig& c, const std::string& s) { c.saturation_bits = parse_double(s); };
  f.get = [](const ExperimentConfig& c) { return fmt_double(c.saturation_bits); };
  return f;
}

const FieldTable& fields() {
  using C = ExperimentConfig;
  static const FieldTable table = {
      {"scenario",
       {{"environment", make_field(&C::scenario, &ScenarioConfig::environment)},
        {"n_voip", make_field(&C::scenario, &ScenarioConfig::n_voip)},
        {"full_buffer", make_field(&C::scenario, &ScenarioConfig::full_buffer)},
        {"voip_packet_bits", make_field(&C::scenario, &ScenarioConfig::voip_packet_bits)},
        {"voip_period_ttis", make_field(&C::scenario, &ScenarioConfig::voip_period_ttis)},
        {"toy_list_size", make_field(&C::scenario, &ScenarioConfig::toy_list_size)},
        {"toy_max_value", make_field(&C::scenario, &ScenarioConfig::toy_max_value)}}},
      {"grid",
       {{"prbs_per_direction", make_field(&C::grid, &GridConfig::prbs_per_direction)},
        {"bits_per_prb", make_field(&C::grid, &GridConfig::bits_per_prb)},
        {"pdcch_capacity", make_field(&C::grid, &GridConfig::pdcch_capacity)},
        {"tti_duration_s", make_field(&C::grid, &GridConfig::tti_duration_s)},
        {"bler", make_field(&C::grid, &GridConfig::bler)}}},
      {"policy",
       {{"name", make_field(&C::policy, &PolicyConfig::name)},
        {"voip_first", make_field(&C::policy, &PolicyConfig::voip_first)},
        {"pf_ema", make_field(&C::policy, &PolicyConfig::pf_ema)}}},
      {"reward",
       {{"preference", make_field(&C::reward, &RewardConfig::preference)},
        {"full_buffer_norm", make_field(&C::reward, &RewardConfig::full_buffer_norm)},
        {"voip_norm", make_field(&C::reward, &RewardConfig::voip_norm)}}},
      {"features", {{"saturation_bits", saturation_field()}}},
      {"network",
       {{"encoder_dense", make_field(&C::network, &NetworkConfig::encoder_dense)},
        {"encoder_gru", make_field(&C::network, &NetworkConfig::encoder_gru)},
        {"q_hidden", make_field(&C::network, &NetworkConfig::q_hidden)}}},
      {"training",
       {{"gamma", make_field(&C::training, &TrainingConfig::gamma)},
        {"learning_rate", make_field(&C::training, &TrainingConfig::learning_rate)},
        {"adam_beta1", make_field(&C::training, &TrainingConfig::adam_beta1)},
        {"adam_beta2", make_field(&C::training, &TrainingConfig::adam_beta2)},
        {"adam_epsilon", make_field(&C::training, &TrainingConfig::adam_epsilon)},
        {"max_grad_norm", make_field(&C::training, &TrainingConfig::max_grad_norm)},
        {"batch_size", make_field(&C::training, &TrainingConfig::batch_size)},
        {"replay_capacity", make_field(&C::training, &TrainingConfig::replay_capacity)},
        {"replay_warmup", make_field(&C::training, &TrainingConfig::replay_warmup)},
        {"replay_mode", make_field(&C::training, &TrainingConfig::replay_mode)},
        {"alpha", make_field(&C::training, &TrainingConfig::alpha)},
        {"beta_start", make_field(&C::training, &TrainingConfig::beta_start)},
        {"beta_end", make_field(&C::training, &TrainingConfig::beta_end)},
        {"target_mode", make_field(&C::training, &TrainingConfig::target_mode)},
        {"discount", make_field(&C::training, &TrainingConfig::discount)},
        {"target_period", make_field(&C::training, &TrainingConfig::target_period)},
        {"actors", make_field(&C::training, &TrainingConfig::actors)},
        {"actor_ttis_per_learner_step", make_field(&C::training, &TrainingConfig::actor_ttis_per_learner_step)},
        {"sync_period_ttis", make_field(&C::training, &TrainingConfig::sync_period_ttis)},
        {"total_ttis", make_field(&C::training, &TrainingConfig::total_ttis)},
        {"max_learner_steps", make_field(&C::training, &TrainingConfig::max_learner_steps)},
        {"exploration_start", make_field(&C::training, &TrainingConfig::exploration_start)},
        {"exploration_end", make_field(&C::training, &TrainingConfig::exploration_end)},
        {"exploration_horizon_ttis", make_field(&C::training, &TrainingConfig::exploration_horizon_ttis)},
        {"checkpoint_every", make_field(&C::training, &TrainingConfig::checkpoint_every)},
        {"deterministic", make_field(&C::training, &TrainingConfig::deterministic)}}},
      {"eval",
       {{"ttis", make_field(&C::eval, &EvalConfig::ttis)},
        {"throughput_window_ttis", make_field(&C::eval, &EvalConfig::throughput_window_ttis)},
        {"toy_lists", make_field(&C::eval, &EvalConfig::toy_lists)}}},
      {"run",
       {{"seed", make_field(&C::run, &RunConfig::seed)},
        {"out_dir", make_field(&C::run, &RunConfig::out_dir)}}},
  };
  return table;
}

void require(bool ok, const std::string& key, const std::string& what) {
  if (!ok) throw std::invalid_argument(key + ": " + what);
}

void require_layers(const std::vector<int>& xs, const std::string& key, bool allow_empty) {
  require(allow_empty || !xs.empty(), key, "must not be empty");
  for (int x : xs) require(x > 0, key, "layer sizes must be > 0");
}

}  // namespace

void ExperimentConfig::validate() const {
  require(scenario.environment == "scheduler" || scenario.environment == "toy_sort",
          "scenario.environment", "must be scheduler or toy_sort");
  require(scenario.n_voip >= 0, "scenario.n_voip", "must be >= 0");
  require(scenario.voip_packet_bits > 0, "scenario.voip_packet_bits", "must be > 0");
  require(scenario.voip_period_ttis > 0, "scenario.voip_period_ttis", "must be > 0");
  require(scenario.toy_list_size > 0, "scenario.toy_list_size", "must be > 0");
  require(scenario.toy_max_value >= scenario.toy_list_size, "scenario.toy_max_value", "must be >= toy_list_size");
  require(grid.prbs_per_direction > 0, "grid.prbs_per_direction", "must be > 0");
  require(grid.bits_per_prb > 0, "grid.bits_per_prb", "must be > 0");
  require(grid.pdcch_capacity > 0, "grid.pdcch_capacity", "must be > 0");
  require(grid.tti_duration_s > 0.0, "grid.tti_duration_s", "must be > 0");
  require(grid.bler >= 0.0 && grid.bler < 1.0, "grid.bler", "must lie in [0, 1)");
  require(policy.name == "qadra" || policy.name == "round_robin" || policy.name == "proportional_fair",
          "policy.name", "must be qadra, round_robin or proportional_fair");
  require(policy.pf_ema > 0.0 && policy.pf_ema <= 1.0, "policy.pf_ema", "must lie in (0, 1]");
  require(reward.preference.size() == 2, "reward.preference", "needs two weights (full buffer, voip)");
  require(reward.full_buffer_norm > 0.0, "reward.full_buffer_norm", "must be > 0");
  require(reward.voip_norm > 0.0, "reward.voip_norm", "must be > 0");
  require(saturation_bits > 0.0, "features.saturation_bits", "must be > 0");
  require_layers(network.encoder_dense, "network.encoder_dense", true);
  require_layers(network.encoder_gru, "network.encoder_gru", false);
  require_layers(network.q_hidden, "network.q_hidden", true);
  const auto& t = training;
  require(t.gamma >= 0.0 && t.gamma <= 1.0, "training.gamma", "must lie in [0, 1]");
  require(t.learning_rate > 0.0, "training.learning_rate", "must be > 0");
  require(t.adam_beta1 >= 0.0 && t.adam_beta1 < 1.0, "training.adam_beta1", "must lie in [0, 1)");
  require(t.adam_beta2 >= 0.0 && t.adam_beta2 < 1.0, "training.adam_beta2", "must lie in [0, 1)");
  require(t.adam_epsilon > 0.0, "training.adam_epsilon", "must be > 0");
  require(t.max_grad_norm >= 0.0, "training.max_grad_norm", "must be >= 0");
  require(t.batch_size > 0, "training.batch_size", "must be > 0");
  require(t.replay_capacity > 0, "training.replay_capacity", "must be > 0");
  require(t.replay_warmup >= 1 && t.replay_warmup <= t.replay_capacity, "training.replay_warmup",
          "must lie in [1, replay_capacity]");
  require(t.replay_mode == "prioritized" || t.replay_mode == "uniform", "training.replay_mode",
          "must be prioritized or uniform");
  require(t.alpha >= 0.0, "training.alpha", "must be >= 0");
  require(t.beta_start >= 0.0 && t.beta_end >= 0.0, "training.beta_start", "beta must be >= 0");
  require(t.target_mode == "double" || t.target_mode == "vanilla", "training.target_mode", "must be double or vanilla");
  require(t.discount == "per_step" || t.discount == "per_tti", "training.discount", "must be per_step or per_tti");
  require(t.target_period > 0, "training.target_period", "must be > 0");
  require(t.actors > 0, "training.actors", "must be > 0");
  require(t.actor_ttis_per_learner_step > 0, "training.actor_ttis_per_learner_step", "must be > 0");
  require(t.sync_period_ttis > 0, "training.sync_period_ttis", "must be > 0");
  require(t.total_ttis >= 0, "training.total_ttis", "must be >= 0");
  require(t.max_learner_steps >= 0, "training.max_learner_steps", "must be >= 0");
  require(t.exploration_start > 0.0 && t.exploration_start <= 1.0, "training.exploration_start", "must lie in (0, 1]");
  require(t.exploration_end > 0.0 && t.exploration_end <= 1.0, "training.exploration_end", "must lie in (0, 1]");
  require(t.exploration_horizon_ttis > 0, "training.exploration_horizon_ttis", "must be > 0");
  require(t.checkpoint_every >= 0, "training.checkpoint_every", "must be >= 0");
  require(eval.ttis >= 0, "eval.ttis", "must be >= 0");
  require(eval.throughput_window_ttis > 0, "eval.throughput_window_ttis", "must be > 0");
  require(eval.toy_lists > 0, "eval.toy_lists", "must be > 0");
  require(!run.out_dir.empty(), "run.out_dir", "must not be empty");
}

sim::TrafficConfig ExperimentConfig::traffic() const {
  sim::TrafficConfig t;
  t.n_voip_users = scenario.n_voip;
  t.full_buffer = scenario.full_buffer;
  t.voip_packet_bits = scenario.voip_packet_bits;
  t.voip_period_ttis = scenario.voip_period_ttis;
  return t;
}

sim::ResourceGridConfig ExperimentConfig::resource_grid() const {
  sim::ResourceGridConfig g;
  g.prbs_per_direction = grid.prbs_per_direction;
  g.bits_per_prb = grid.bits_per_prb;
  g.pdcch_capacity = grid.pdcch_capacity;
  g.tti_duration_s = grid.tti_duration_s;
  g.bler = grid.bler;
  return g;
}

nn::NetworkArch ExperimentConfig::arch() const {
  nn::NetworkArch a;
  a.encoder.dense = network.encoder_dense;
  a.encoder.gru = network.encoder_gru;
  a.q_hidden = network.q_hidden;
  return a;
}

agent::SchedulerEnvConfig ExperimentConfig::scheduler_env() const {
  agent::SchedulerEnvConfig e;
  e.traffic = traffic();
  e.grid = resource_grid();
  e.preference = reward.preference;
  e.scales.full_buffer_norm = reward.full_buffer_norm;
  e.scales.voip_norm = reward.voip_norm;
  e.saturation_bits = saturation_bits;
  return e;
}

replay::ReplayConfig ExperimentConfig::replay() const {
  replay::ReplayConfig r;
  r.capacity = static_cast<std::size_t>(training.replay_capacity);
  r.warmup = static_cast<std::size_t>(training.replay_warmup);
  r.alpha = training.alpha;
  r.uniform = training.replay_mode == "uniform";
  return r;
}

agent::LearnerConfig ExperimentConfig::learner() const {
  agent::LearnerConfig l;
  l.gamma = training.gamma;
  l.batch_size = static_cast<std::size_t>(training.batch_size);
  l.target_period = training.target_period;
  l.target_mode = training.target_mode == "vanilla" ? agent::TargetMode::kVanilla : agent::TargetMode::kDouble;
  l.discount = training.discount == "per_tti" ? agent::DiscountMode::kPerTti : agent::DiscountMode::kPerStep;
  l.beta_start = training.beta_start;
  l.beta_end = training.beta_end;
  const std::int64_t planned =
      training.total_ttis * training.actors / training.actor_ttis_per_learner_step;
  l.beta_steps = std::max<std::int64_t>(
      1, training.max_learner_steps > 0 ? std::min(planned, training.max_learner_steps) : planned);
  l.adam.learning_rate = training.learning_rate;
  l.adam.beta1 = training.adam_beta1;
  l.adam.beta2 = training.adam_beta2;
  l.adam.epsilon = training.adam_epsilon;
  if (training.max_grad_norm > 0.0) l.adam.max_grad_norm = training.max_grad_norm;
  return l;
}

ExperimentConfig parse_config(const std::string& text) {
  boost::property_tree::ptree tree;
  std::istringstream in(text);
  try {
    boost::property_tree::ini_parser::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw std::invalid_argument(std::string("config syntax error: ") + e.message() + " (line " +
                                std::to_string(e.line()) + ")");
  }
  ExperimentConfig config;
  const auto& table = fields();
  for (const auto& [section, node] : tree) {
    if (node.empty()) throw std::invalid_argument("key outside any section: " + section);
    auto sit = std::find_if(table.begin(), table.end(), [&](const auto& s) { return s.first == section; });
    if (sit == table.end()) throw std::invalid_argument("unknown config section [" + section + "]");
    for (const auto& [key, value] : node) {
      auto kit = std::find_if(sit->second.begin(), sit->second.end(), [&](const auto& f) { return f.first == key; });
      if (kit == sit->second.end()) throw std::invalid_argument("unknown config key " + section + "." + key);
      try {
        kit->second.set(config, boost::algorithm::trim_copy(value.data()));
      } catch (const std::invalid_argument& e) {
        throw std::invalid_argument(section + "." + key + ": " + e.what());
      }
    }
  }
  config.validate();
  return config;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string serialize_config(const ExperimentConfig& config) {
  std::ostringstream out;
  bool first = true;
  for (const auto& [section, entries] : fields()) {
    if (!first) out << '\n';
    first = false;
    out << '[' << section << "]\n";
    for (const auto& [key, field] : entries) out << key << " = " << field.get(config) << '\n';
  }
  return out.str();
}

}  // namespace qadra::harness
