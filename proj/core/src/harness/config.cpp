#include "intentsim/harness/config.hpp"

#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

namespace intentsim::harness {

using json = nlohmann::json;

std::vector<uint64_t> default_eval_seeds() {
  std::vector<uint64_t> seeds(20);
  for (size_t i = 0; i < seeds.size(); ++i) seeds[i] = 1000 + i;
  return seeds;
}

RunConfig RunConfig::resolved() const {
  RunConfig r = *this;
  r.environment = environment.resolved();
  if (r.train.gamma < 0.0)
    r.train.gamma = r.environment.task == env::Task::SearchAndRescue ? 0.35 : 0.85;
  if (r.eval_seeds.empty()) r.eval_seeds = default_eval_seeds();
  return r;
}

void RunConfig::validate() const {
  RunConfig r = resolved();
  try {
    r.environment.validate();
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  if (r.out_size < 3 || r.out_size % 2 == 0)
    throw ConfigError("out_size must be odd and at least 3");
  if (r.train.total_steps < 40) throw ConfigError("total_steps must be at least 40");
  if (r.eval_tick_budget <= 0) throw ConfigError("eval_tick_budget must be positive");
  if (r.train_runs < 1) throw ConfigError("train_runs must be at least 1");
  if (r.variant == percept::IntentionVariant::NonspatialTiled ||
      r.variant == percept::IntentionVariant::PerRobotChannels) {
    if (r.environment.team.size() < 2)
      throw ConfigError("per-robot intention variants need a team of at least 2");
  }
}

RunConfig run_config_from_json(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  try {
    RunConfig cfg;
    cfg.environment = env::environment_spec_from_json(j.at("environment").dump());
    if (j.contains("variant"))
      cfg.variant = percept::intention_variant_from_string(j["variant"].get<std::string>());
    if (j.contains("predictor_history")) cfg.predictor_history = j["predictor_history"].get<bool>();
    if (j.contains("scale")) cfg.scale = nn::scale_from_string(j["scale"].get<std::string>());
    if (j.contains("out_size")) cfg.out_size = j["out_size"].get<int>();
    if (j.contains("sensor")) {
      const json& s = j["sensor"];
      if (s.contains("fov")) cfg.sensor_fov = s["fov"].get<double>();
      if (s.contains("range")) cfg.sensor_range = s["range"].get<double>();
    }
    if (j.contains("channel")) {
      const json& c = j["channel"];
      if (c.contains("drop_probability"))
        cfg.channel.drop_probability = c["drop_probability"].get<double>();
      if (c.contains("delay_ticks")) cfg.channel.delay_ticks = c["delay_ticks"].get<int>();
    }
    cfg.train.gamma = -1.0;  // resolved by task unless given
    if (j.contains("train")) {
      const json& t = j["train"];
      if (t.contains("total_steps")) cfg.train.total_steps = t["total_steps"].get<int64_t>();
      if (t.contains("lr")) cfg.train.lr = t["lr"].get<double>();
      if (t.contains("momentum")) cfg.train.momentum = t["momentum"].get<double>();
      if (t.contains("weight_decay")) cfg.train.weight_decay = t["weight_decay"].get<double>();
      if (t.contains("batch_size")) cfg.train.batch_size = t["batch_size"].get<int>();
      if (t.contains("gamma")) cfg.train.gamma = t["gamma"].get<double>();
      if (t.contains("grad_clip")) cfg.train.grad_clip = t["grad_clip"].get<double>();
      if (t.contains("train_frequency")) cfg.train.train_frequency = t["train_frequency"].get<int>();
      if (t.contains("target_update_interval"))
        cfg.train.target_update_interval = t["target_update_interval"].get<int>();
      if (t.contains("epsilon_final")) cfg.train.epsilon_final = t["epsilon_final"].get<double>();
    }
    if (j.contains("train_seed") && !j["train_seed"].is_null())
      cfg.train_seed = j["train_seed"].get<uint64_t>();
    if (j.contains("eval_seeds")) cfg.eval_seeds = j["eval_seeds"].get<std::vector<uint64_t>>();
    if (j.contains("eval_tick_budget")) cfg.eval_tick_budget = j["eval_tick_budget"].get<int64_t>();
    if (j.contains("eval_epsilon")) cfg.eval_epsilon = j["eval_epsilon"].get<double>();
    if (j.contains("train_runs")) cfg.train_runs = j["train_runs"].get<int>();
    cfg.validate();
    return cfg;
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config error: ") + e.what());
  }
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return run_config_from_json(ss.str());
}

std::string run_config_to_json(const RunConfig& raw) {
  RunConfig cfg = raw.resolved();
  json j;
  j["environment"] = json::parse(env::environment_spec_to_json(cfg.environment));
  j["variant"] = percept::to_string(cfg.variant);
  j["predictor_history"] = cfg.predictor_history;
  j["scale"] = nn::to_string(cfg.scale);
  j["out_size"] = cfg.out_size;
  j["sensor"] = {{"fov", cfg.sensor_fov}, {"range", cfg.sensor_range}};
  j["channel"] = {{"drop_probability", cfg.channel.drop_probability},
                  {"delay_ticks", cfg.channel.delay_ticks}};
  j["train"] = {{"total_steps", cfg.train.total_steps},
                {"lr", cfg.train.lr},
                {"momentum", cfg.train.momentum},
                {"weight_decay", cfg.train.weight_decay},
                {"batch_size", cfg.train.batch_size},
                {"gamma", cfg.train.gamma},
                {"grad_clip", cfg.train.grad_clip},
                {"train_frequency", cfg.train.train_frequency},
                {"target_update_interval", cfg.train.target_update_interval},
                {"epsilon_final", cfg.train.epsilon_final}};
  if (cfg.train_seed)
    j["train_seed"] = *cfg.train_seed;
  else
    j["train_seed"] = nullptr;
  j["eval_seeds"] = cfg.eval_seeds;
  j["eval_tick_budget"] = cfg.eval_tick_budget;
  j["eval_epsilon"] = cfg.eval_epsilon;
  j["train_runs"] = cfg.train_runs;
  j["intention_stale_policy"] = "elapsed-truncation";
  return j.dump(2);
}

}  // namespace intentsim::harness
