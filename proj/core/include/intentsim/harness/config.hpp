#pragma once

#include <optional>
#include <string>

#include "intentsim/coord/episode.hpp"

namespace intentsim::harness {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Full experiment description: environment, team, representation variant,
/// training recipe, seeds and budgets. Everything here is echoed into run
/// metadata so artifacts are auditable.
struct RunConfig {
  RunConfig() { train.gamma = -1.0; }  // resolved per task unless overridden

  env::EnvironmentSpec environment;
  percept::IntentionVariant variant = percept::IntentionVariant::RampPath;
  bool predictor_history = false;
  nn::Scale scale = nn::Scale::Desk;
  int out_size = 21;
  double sensor_fov = M_PI / 2.0;
  double sensor_range = 10.0;
  coord::ChannelModel channel;
  learn::TrainConfig train;

  /// Training is unseeded by default; CI and the acceptance suite pin one.
  std::optional<uint64_t> train_seed;
  std::vector<uint64_t> eval_seeds;  // shared across compared methods
  int64_t eval_tick_budget = 200;
  double eval_epsilon = 0.01;
  int train_runs = 5;  // policies per method in comparisons

  /// Applies task-dependent defaults (discount, object counts).
  RunConfig resolved() const;
  void validate() const;
};

RunConfig run_config_from_json(const std::string& json_text);
RunConfig load_run_config(const std::string& path);
std::string run_config_to_json(const RunConfig& config);

std::vector<uint64_t> default_eval_seeds();

}  // namespace intentsim::harness
