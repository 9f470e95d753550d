#include "intentsim/harness/run.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <future>
#include <map>
#include <nlohmann/json.hpp>
#include <set>

#include "intentsim/env/generate.hpp"
#include "intentsim/grid/pgm.hpp"
#include "intentsim/harness/csv.hpp"
#include "intentsim/learn/checkpoint.hpp"

namespace intentsim::harness {

namespace fs = std::filesystem;
using json = nlohmann::json;
using env::RobotKind;
using learn::QNetwork;
using learn::QNetworkSpec;

namespace {

std::mt19937 make_rng(uint64_t master, uint32_t tag) {
  std::seed_seq seq{uint32_t(master & 0xffffffffu), uint32_t(master >> 32), tag};
  return std::mt19937(seq);
}

std::vector<RobotKind> distinct_kinds(const std::vector<RobotKind>& team) {
  std::vector<RobotKind> kinds;
  for (RobotKind k : team)
    if (std::find(kinds.begin(), kinds.end(), k) == kinds.end()) kinds.push_back(k);
  return kinds;
}

std::vector<std::string> channel_names(const RunConfig& cfg) {
  std::vector<std::string> names{"environment", "agents"};
  if (cfg.environment.task == env::Task::Foraging) names.push_back("receptacle_distance");
  names.push_back("self_distance");
  int team = int(cfg.environment.team.size());
  int intent = percept::intention_channel_count(cfg.variant, team);
  if (cfg.variant == percept::IntentionVariant::NonspatialTiled) {
    for (int i = 0; i < intent; ++i)
      names.push_back("intention_tiled_" + std::to_string(i / 2) + (i % 2 == 0 ? "_x" : "_y"));
  } else if (intent == 1) {
    names.push_back("intention");
  } else {
    for (int i = 0; i < intent; ++i) names.push_back("intention_" + std::to_string(i));
  }
  return names;
}

std::string checkpoint_meta(const RunConfig& cfg, RobotKind kind, int64_t step,
                            uint64_t seed) {
  json j;
  j["config"] = json::parse(run_config_to_json(cfg));
  j["robot_kind"] = env::to_string(kind);
  j["step"] = step;
  j["train_seed_used"] = seed;
  j["channel_names"] = channel_names(cfg);
  return j.dump();
}

coord::EpisodeConfig episode_config(const RunConfig& cfg, bool train_mode) {
  coord::EpisodeConfig ec;
  ec.variant = cfg.variant;
  ec.out_size = cfg.out_size;
  ec.sensor_fov = cfg.sensor_fov;
  ec.sensor_range = cfg.sensor_range;
  ec.channel = cfg.channel;
  ec.predictor_history = cfg.predictor_history;
  ec.train_mode = train_mode;
  ec.eval_epsilon = cfg.eval_epsilon;
  ec.tick_budget = train_mode ? 0 : cfg.eval_tick_budget;
  return ec;
}

// Owning policy container for one run (training or evaluation).
struct PolicyBundle {
  std::map<RobotKind, std::unique_ptr<QNetwork>> online, target;
  std::map<RobotKind, std::unique_ptr<predict::Predictor>> predictors;
  std::map<RobotKind, learn::ReplayBuffer> buffers;
  std::map<RobotKind, nn::SgdOptimizer<float>> optimizers;
  std::map<RobotKind, nn::SgdOptimizer<float>> predictor_optimizers;
  coord::PolicySet set;

  void build(const RunConfig& cfg, uint64_t seed, bool with_targets) {
    const int team = int(cfg.environment.team.size());
    for (RobotKind kind : distinct_kinds(cfg.environment.team)) {
      QNetworkSpec qs =
          QNetworkSpec::make(cfg.environment.task, cfg.variant, team, kind, cfg.scale);
      auto net = std::make_unique<QNetwork>(qs);
      net->init(uint32_t(make_rng(seed, 100 + uint32_t(kind))()));
      if (with_targets) {
        auto tgt = std::make_unique<QNetwork>(qs);
        tgt->copy_from(*net);
        target[kind] = std::move(tgt);
        buffers.emplace(kind, learn::ReplayBuffer(10000));
        optimizers.emplace(kind, nn::SgdOptimizer<float>());
      }
      if (cfg.variant == percept::IntentionVariant::Predicted) {
        auto pred = std::make_unique<predict::Predictor>(predict::PredictorSpec::make(
            cfg.environment.task, cfg.predictor_history, cfg.scale));
        pred->init(uint32_t(make_rng(seed, 200 + uint32_t(kind))()));
        set.predictor[kind] = pred.get();
        predictors[kind] = std::move(pred);
        if (with_targets) predictor_optimizers.emplace(kind, nn::SgdOptimizer<float>());
      }
      set.q[kind] = net.get();
      online[kind] = std::move(net);
    }
  }
};

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

void write_metadata(const RunConfig& cfg, const std::string& out_dir, json extra) {
  json j;
  j["config"] = json::parse(run_config_to_json(cfg));
  j["channel_names"] = channel_names(cfg);
  const percept::ChannelEncoding& enc = percept::kChannelEncoding;
  j["channel_values"] = {{"env_free", enc.env_free},     {"env_unknown", enc.env_unknown},
                         {"env_obstacle", enc.env_obstacle}, {"env_object", enc.env_object},
                         {"self", enc.self_footprint},    {"self_carrying", enc.self_carrying},
                         {"other", enc.other_footprint},  {"other_carrying", enc.other_carrying}};
  j["extra"] = std::move(extra);
  write_text(out_dir + "/metadata.json", j.dump(2));
}

}  // namespace

TrainResult cmd_train(const RunConfig& raw, const std::string& out_dir,
                      std::optional<uint64_t> seed_override) {
  raw.validate();
  RunConfig cfg = raw.resolved();
  fs::create_directories(out_dir);

  uint64_t seed;
  if (seed_override)
    seed = *seed_override;
  else if (cfg.train_seed)
    seed = *cfg.train_seed;
  else
    seed = (uint64_t(std::random_device{}()) << 32) ^ std::random_device{}();

  PolicyBundle bundle;
  bundle.build(cfg, seed, /*with_targets=*/true);

  std::mt19937 env_rng = make_rng(seed, 1);
  std::mt19937 action_rng = make_rng(seed, 10);
  std::mt19937 channel_rng = make_rng(seed, 11);
  std::mt19937 buffer_rng = make_rng(seed, 12);

  TrainResult result;
  result.seed_used = seed;
  result.log_path = out_dir + "/training_log.csv";
  result.trace_path = out_dir + "/schedule_trace.csv";
  CsvWriter log(result.log_path, {"step", "epsilon", "loss", "buffer_size", "episode_return"});
  CsvWriter trace(result.trace_path, {"step", "event"});

  TrainStats& stats = result.stats;
  stats.prefill_steps = cfg.train.prefill_steps();
  const int64_t total = cfg.train.total_steps;
  const int64_t ckpt_interval = std::max<int64_t>(total / 10, 1);
  double last_episode_return = 0.0;

  auto save_all = [&](const std::string& suffix) {
    std::vector<std::string> paths;
    for (auto& [kind, net] : bundle.online) {
      std::string path =
          out_dir + "/policy_" + env::to_string(kind) + suffix + ".simq";
      auto params = net->fcn().params();
      learn::save_checkpoint(path, learn::kPolicyMagic, params,
                             checkpoint_meta(cfg, kind, stats.steps, seed));
      paths.push_back(path);
    }
    for (auto& [kind, pred] : bundle.predictors) {
      std::string path =
          out_dir + "/predictor_" + env::to_string(kind) + suffix + ".simp";
      auto params = pred->fcn().params();
      learn::save_checkpoint(path, learn::kPredictorMagic, params,
                             checkpoint_meta(cfg, kind, stats.steps, seed));
      if (suffix.empty()) result.predictor_paths.push_back(path);
    }
    return paths;
  };

  coord::TrainSink sink;
  sink.epsilon = [&]() {
    return stats.steps < stats.prefill_steps ? 1.0 : learn::epsilon_at(stats.steps, cfg.train);
  };
  sink.on_transition = [&](int, RobotKind kind, learn::Transition&& t) {
    bundle.buffers.at(kind).push(std::move(t));
  };
  sink.stop_requested = [&]() { return stats.steps >= total; };
  sink.use_predicted_intention = [&]() {
    return predict::intention_source(std::min(stats.steps, total), total, true) ==
           predict::IntentionSource::Predicted;
  };
  sink.after_decision = [&]() {
    stats.steps++;
    const int64_t step = stats.steps;
    if (step == stats.prefill_steps) trace.row({fmt(step), "prefill_end"});

    if (step % cfg.train.train_frequency == 0 && step > stats.prefill_steps) {
      bool trained = false;
      for (auto& [kind, buffer] : bundle.buffers) {
        if (buffer.size() < size_t(cfg.train.batch_size)) continue;
        auto indices = buffer.sample_indices(size_t(cfg.train.batch_size), buffer_rng);
        float loss = learn::train_on_indices(buffer, indices, *bundle.online.at(kind),
                                             *bundle.target.at(kind), cfg.train,
                                             bundle.optimizers.at(kind));
        trained = true;
        log.row({fmt(step), fmt(sink.epsilon()), fmt(double(loss)), fmt(int64_t(buffer.size())),
                 fmt(last_episode_return)});

        if (cfg.variant == percept::IntentionVariant::Predicted) {
          // Supervised predictor step on the same sampled states.
          const int base = percept::base_channel_count(cfg.environment.task);
          const int in_ch = base + (cfg.predictor_history ? 1 : 0);
          nn::Tensor<float> inputs(int(indices.size()), in_ch, cfg.out_size, cfg.out_size);
          nn::Tensor<float> targets(int(indices.size()), 1, cfg.out_size, cfg.out_size);
          bool usable = true;
          for (size_t i = 0; i < indices.size() && usable; ++i) {
            const learn::Transition& tr = buffer.at(indices[i]);
            if (!tr.true_intention ||
                (cfg.predictor_history && !tr.history_channel)) {
              usable = false;
              break;
            }
            for (int c = 0; c < base; ++c) {
              const auto& vals = tr.state.channels[size_t(c)].values();
              std::copy(vals.begin(), vals.end(), inputs.plane(int(i), c));
            }
            if (cfg.predictor_history) {
              const auto& vals = tr.history_channel->values();
              std::copy(vals.begin(), vals.end(), inputs.plane(int(i), base));
            }
            const auto& tv = tr.true_intention->values();
            std::copy(tv.begin(), tv.end(), targets.plane(int(i), 0));
          }
          if (usable)
            bundle.predictors.at(kind)->train_batch(inputs, targets, cfg.train.sgd());
        }
      }
      if (trained) {
        stats.gradient_steps.push_back(step);
        trace.row({fmt(step), "train"});
      }
    }

    if (step > 0 && step % cfg.train.target_update_interval == 0) {
      for (auto& [kind, net] : bundle.online)
        learn::sync_target(*net, *bundle.target.at(kind), step, cfg.train);
      stats.sync_steps.push_back(step);
      trace.row({fmt(step), "sync"});
    }
    if (step % ckpt_interval == 0) {
      save_all("_step" + std::to_string(step));
      trace.row({fmt(step), "checkpoint"});
    }
  };

  coord::EpisodeConfig ec = episode_config(cfg, /*train_mode=*/true);
  while (stats.steps < total) {
    uint64_t env_seed = (uint64_t(env_rng()) << 32) ^ env_rng();
    env::WorldState world = env::generate_environment(cfg.environment, env_seed);
    coord::EpisodeMetrics metrics =
        coord::run_episode(world, bundle.set, ec, &sink, action_rng, channel_rng);
    stats.episodes++;
    double mean_return = 0.0;
    for (double r : metrics.agent_returns) mean_return += r;
    last_episode_return = metrics.agent_returns.empty()
                              ? 0.0
                              : mean_return / double(metrics.agent_returns.size());
    trace.row({fmt(stats.steps), "episode_end"});
  }

  result.checkpoint_paths = save_all("");
  log.close();
  trace.close();
  write_metadata(cfg, out_dir,
                 json{{"mode", "train"},
                      {"seed_used", seed},
                      {"episodes", stats.episodes},
                      {"steps", stats.steps}});
  return result;
}

namespace {

// Rebuilds the policy set a checkpoint list describes, verifying each file
// against the run configuration.
void load_policies(const std::vector<std::string>& checkpoints, const RunConfig& cfg,
                   PolicyBundle& bundle) {
  bundle.build(cfg, /*seed=*/0, /*with_targets=*/false);
  std::set<RobotKind> loaded;
  std::set<RobotKind> loaded_predictors;
  for (const std::string& path : checkpoints) {
    bool predictor = path.size() > 5 && path.substr(path.size() - 5) == ".simp";
    std::string meta_text = learn::read_checkpoint_meta(
        path, predictor ? learn::kPredictorMagic : learn::kPolicyMagic);
    json meta = json::parse(meta_text);
    std::string kind_name = meta.at("robot_kind").get<std::string>();
    RobotKind kind;
    bool found = false;
    for (RobotKind k : distinct_kinds(cfg.environment.team))
      if (kind_name == env::to_string(k)) {
        kind = k;
        found = true;
      }
    if (!found)
      throw std::runtime_error("checkpoint " + path + " is for robot kind '" + kind_name +
                               "', which this configuration's team lacks");
    if (predictor) {
      auto params = bundle.predictors.at(kind)->fcn().params();
      learn::load_checkpoint(path, learn::kPredictorMagic, params);
      loaded_predictors.insert(kind);
    } else {
      auto params = bundle.online.at(kind)->fcn().params();
      learn::load_checkpoint(path, learn::kPolicyMagic, params);
      loaded.insert(kind);
    }
  }
  for (RobotKind k : distinct_kinds(cfg.environment.team)) {
    if (!loaded.count(k))
      throw std::runtime_error(std::string("no checkpoint provided for robot kind ") +
                               env::to_string(k));
    if (cfg.variant == percept::IntentionVariant::Predicted && !loaded_predictors.count(k))
      throw std::runtime_error(std::string("no predictor checkpoint for robot kind ") +
                               env::to_string(k));
  }
}

const std::array<std::array<uint8_t, 3>, 6> kAgentColors = {{{200, 30, 30},
                                                             {30, 60, 200},
                                                             {20, 140, 60},
                                                             {230, 140, 20},
                                                             {140, 40, 160},
                                                             {20, 160, 170}}};

void render_trajectory_overlay(const env::WorldState& world,
                               const std::vector<coord::TrajectorySample>& trajectory,
                               const std::string& path) {
  const int scale = 6;
  const int W = world.grid.width(), H = world.grid.height();
  grid::RgbImage img(W * scale, H * scale);
  for (int r = 0; r < H; ++r)
    for (int c = 0; c < W; ++c) {
      std::array<uint8_t, 3> color{255, 255, 255};
      if (world.grid.at(c, r) == grid::Cell::Obstacle) color = {40, 40, 40};
      if (world.receptacle.contains({c, r})) color = {255, 205, 205};
      for (int dy = 0; dy < scale; ++dy)
        for (int dx = 0; dx < scale; ++dx) img.set(c * scale + dx, r * scale + dy, color);
    }
  for (const env::ObjectState& o : world.objects) {
    // Initial object cells, light yellow blocks.
    grid::CellCoord c = o.cell();
    for (int dy = 1; dy < scale - 1; ++dy)
      for (int dx = 1; dx < scale - 1; ++dx)
        img.set(c.col * scale + dx, c.row * scale + dy, {235, 200, 60});
  }
  for (const auto& sample : trajectory) {
    auto color = kAgentColors[size_t(sample.agent_id) % kAgentColors.size()];
    int px = int(sample.x * scale), py = int(sample.y * scale);
    for (int dy = -1; dy <= 1; ++dy)
      for (int dx = -1; dx <= 1; ++dx) {
        int x = px + dx, y = py + dy;
        if (x >= 0 && x < W * scale && y >= 0 && y < H * scale)
          img.set(x, y, color);
      }
  }
  img.write_ppm(path);
}

void write_summary_from_episode_csv(const std::string& episodes_csv,
                                    const std::string& summary_csv) {
  CsvTable table = read_csv(episodes_csv);
  CsvWriter out(summary_csv, {"metric", "mean", "std", "min", "max"});
  for (const std::string& metric :
       {"objects_removed", "obstacle_collisions", "agent_collisions", "total_return",
        "total_distance", "ticks", "decisions"}) {
    int col = table.column(metric);
    std::vector<double> vals;
    for (const auto& row : table.rows) vals.push_back(std::stod(row[size_t(col)]));
    double mean = 0.0;
    for (double v : vals) mean += v;
    mean /= vals.empty() ? 1.0 : double(vals.size());
    double var = 0.0;
    for (double v : vals) var += (v - mean) * (v - mean);
    var /= vals.empty() ? 1.0 : double(vals.size());
    double lo = vals.empty() ? 0.0 : *std::min_element(vals.begin(), vals.end());
    double hi = vals.empty() ? 0.0 : *std::max_element(vals.begin(), vals.end());
    out.row({metric, fmt(mean), fmt(std::sqrt(var)), fmt(lo), fmt(hi)});
  }
  out.close();
}

EvalReport eval_with_policies(PolicyBundle& bundle, const RunConfig& cfg,
                              const std::string& out_dir, bool write_renders,
                              double epsilon_override) {
  fs::create_directories(out_dir);
  RunConfig ecfg = cfg;
  ecfg.eval_epsilon = epsilon_override;
  coord::EpisodeConfig ec = episode_config(ecfg, /*train_mode=*/false);

  EvalReport report;
  report.out_dir = out_dir;
  report.seeds = cfg.eval_seeds;

  CsvWriter episodes(out_dir + "/episodes.csv",
                     {"episode", "seed", "objects_removed", "obstacle_collisions",
                      "agent_collisions", "total_return", "total_distance", "ticks",
                      "decisions"});
  CsvWriter agents(out_dir + "/agents.csv",
                   {"episode", "agent", "kind", "return", "distance", "decisions"});
  CsvWriter events(out_dir + "/events.csv", {"episode", "tick", "agent", "event", "magnitude"});
  CsvWriter traj(out_dir + "/trajectories.csv",
                 {"episode", "tick", "id", "x", "y", "heading", "carrying"});

  for (size_t ei = 0; ei < cfg.eval_seeds.size(); ++ei) {
    uint64_t seed = cfg.eval_seeds[ei];
    env::WorldState world = env::generate_environment(cfg.environment, seed);
    env::WorldState initial = world;  // layout + starting entities for the render
    std::mt19937 action_rng = make_rng(seed, 21);
    std::mt19937 channel_rng = make_rng(seed, 22);
    coord::EpisodeMetrics m =
        coord::run_episode(world, bundle.set, ec, nullptr, action_rng, channel_rng);

    EvalEpisodeRow row;
    row.episode = int(ei);
    row.seed = seed;
    row.objects_removed = m.objects_removed;
    row.obstacle_collisions = m.obstacle_collisions;
    row.agent_collisions = m.agent_collisions;
    for (double r : m.agent_returns) row.total_return += r;
    for (double d : m.distance_traveled) row.total_distance += d;
    row.ticks = m.ticks;
    row.decisions = m.decisions;
    report.episodes.push_back(row);

    episodes.row({fmt(int64_t(row.episode)), fmt(int64_t(seed)),
                  fmt(int64_t(row.objects_removed)), fmt(int64_t(row.obstacle_collisions)),
                  fmt(int64_t(row.agent_collisions)), fmt(row.total_return),
                  fmt(row.total_distance), fmt(row.ticks), fmt(row.decisions)});
    for (size_t a = 0; a < m.agent_returns.size(); ++a)
      agents.row({fmt(int64_t(ei)), fmt(int64_t(a)),
                  env::to_string(world.agents[a].kind), fmt(m.agent_returns[a]),
                  fmt(m.distance_traveled[a]), fmt(int64_t(m.agent_decisions[a]))});
    for (const auto& e : m.events)
      events.row({fmt(int64_t(ei)), fmt(e.tick), fmt(int64_t(e.agent_id)),
                  env::to_string(e.kind), fmt(e.magnitude)});
    for (const auto& s : m.trajectory)
      traj.row({fmt(int64_t(ei)), fmt(s.tick), fmt(int64_t(s.agent_id)), fmt(s.x), fmt(s.y),
                fmt(s.heading), s.carrying ? "1" : "0"});

    if (write_renders)
      render_trajectory_overlay(initial, m.trajectory,
                                out_dir + "/trajectory_" + std::to_string(ei) + ".ppm");
  }
  episodes.close();
  agents.close();
  events.close();
  traj.close();

  write_summary_from_episode_csv(out_dir + "/episodes.csv", out_dir + "/summary.csv");
  CsvTable summary = read_csv(out_dir + "/summary.csv");
  for (const auto& row : summary.rows)
    if (row[0] == "objects_removed") {
      report.mean_objects = std::stod(row[1]);
      report.std_objects = std::stod(row[2]);
    }
  return report;
}

}  // namespace

EvalReport cmd_eval(const std::vector<std::string>& checkpoints, const RunConfig& raw,
                    const std::string& out_dir, bool write_renders) {
  raw.validate();
  RunConfig cfg = raw.resolved();
  PolicyBundle bundle;
  load_policies(checkpoints, cfg, bundle);
  EvalReport report =
      eval_with_policies(bundle, cfg, out_dir, write_renders, cfg.eval_epsilon);
  write_metadata(cfg, out_dir, json{{"mode", "eval"}, {"checkpoints", checkpoints}});
  return report;
}

EvalReport run_random_baseline(const RunConfig& raw, const std::string& out_dir) {
  raw.validate();
  RunConfig cfg = raw.resolved();
  PolicyBundle bundle;
  bundle.build(cfg, /*seed=*/1, /*with_targets=*/false);
  EvalReport report =
      eval_with_policies(bundle, cfg, out_dir, /*write_renders=*/false, /*epsilon=*/1.0);
  write_metadata(cfg, out_dir, json{{"mode", "random_baseline"}});
  return report;
}

void require_same_seeds(const std::vector<EvalReport>& reports) {
  for (size_t i = 1; i < reports.size(); ++i)
    if (reports[i].seeds != reports[0].seeds)
      throw ConfigError(
          "refusing to build a comparison table from evaluations with differing seed lists");
}

CompareResult cmd_compare(std::vector<percept::IntentionVariant> variants, const RunConfig& raw,
                          const std::string& out_dir, int jobs) {
  raw.validate();
  RunConfig base = raw.resolved();
  fs::create_directories(out_dir);

  // Fixed documented column order, whatever order was requested.
  std::vector<percept::IntentionVariant> ordered;
  for (percept::IntentionVariant v : percept::all_intention_variants())
    if (std::find(variants.begin(), variants.end(), v) != variants.end()) ordered.push_back(v);
  if (ordered.empty()) throw ConfigError("compare: no variants requested");

  uint64_t base_seed = base.train_seed ? *base.train_seed
                                       : (uint64_t(std::random_device{}()) << 32) ^
                                             std::random_device{}();

  struct Arm {
    percept::IntentionVariant variant;
    int run = 0;
    std::string dir;
    uint64_t seed = 0;
  };
  std::vector<Arm> arms;
  for (percept::IntentionVariant v : ordered)
    for (int run = 0; run < base.train_runs; ++run) {
      Arm arm;
      arm.variant = v;
      arm.run = run;
      arm.dir = out_dir + "/" + percept::to_string(v) + "_run" + std::to_string(run);
      arm.seed = base_seed + 7919u * uint64_t(run) + 104729u * uint64_t(uint8_t(v));
      arms.push_back(arm);
    }

  auto run_arm = [&](const Arm& arm) {
    RunConfig cfg = base;
    cfg.variant = arm.variant;
    cfg.train_seed = arm.seed;
    TrainResult tr = cmd_train(cfg, arm.dir, arm.seed);
    std::vector<std::string> ckpts = tr.checkpoint_paths;
    ckpts.insert(ckpts.end(), tr.predictor_paths.begin(), tr.predictor_paths.end());
    return cmd_eval(ckpts, cfg, arm.dir + "/eval", /*write_renders=*/false);
  };

  std::vector<EvalReport> reports(arms.size());
  if (jobs <= 1) {
    for (size_t i = 0; i < arms.size(); ++i) reports[i] = run_arm(arms[i]);
  } else {
    size_t next = 0;
    while (next < arms.size()) {
      size_t batch = std::min(size_t(jobs), arms.size() - next);
      std::vector<std::future<EvalReport>> futs;
      for (size_t k = 0; k < batch; ++k)
        futs.push_back(std::async(std::launch::async, run_arm, arms[next + k]));
      for (size_t k = 0; k < batch; ++k) reports[next + k] = futs[k].get();
      next += batch;
    }
  }
  require_same_seeds(reports);

  CompareResult result;
  std::vector<std::string> header{"environment"};
  std::vector<std::string> cells{std::string(env::to_string(base.environment.layout)) + "/" +
                                 env::team_to_string(base.environment.team)};
  CsvWriter detail(out_dir + "/compare_runs.csv",
                   {"variant", "run", "train_seed", "mean_objects_removed"});
  for (size_t vi = 0; vi < ordered.size(); ++vi) {
    CompareArm arm;
    arm.variant = ordered[vi];
    for (size_t ai = 0; ai < arms.size(); ++ai) {
      if (arms[ai].variant != ordered[vi]) continue;
      arm.run_means.push_back(reports[ai].mean_objects);
      detail.row({percept::to_string(arms[ai].variant), fmt(int64_t(arms[ai].run)),
                  fmt(int64_t(arms[ai].seed)), fmt(reports[ai].mean_objects)});
    }
    double mean = 0.0;
    for (double m : arm.run_means) mean += m;
    mean /= double(arm.run_means.size());
    double var = 0.0;
    for (double m : arm.run_means) var += (m - mean) * (m - mean);
    arm.mean = mean;
    arm.stddev = std::sqrt(var / double(arm.run_means.size()));
    result.arms.push_back(arm);

    header.push_back(percept::to_string(ordered[vi]));
    char cell[64];
    std::snprintf(cell, sizeof(cell), "%.2f±%.2f", arm.mean, arm.stddev);
    cells.push_back(cell);
  }
  detail.close();
  result.table_csv = out_dir + "/compare.csv";
  CsvWriter table(result.table_csv, header);
  table.row(cells);
  table.close();
  write_metadata(base, out_dir, json{{"mode", "compare"}, {"base_seed", base_seed}});
  return result;
}

void cmd_render_checkpoint(const std::string& checkpoint_path, const RunConfig& raw,
                           const std::string& out_dir) {
  raw.validate();
  RunConfig cfg = raw.resolved();
  fs::create_directories(out_dir);

  PolicyBundle bundle;
  // A single checkpoint renders its own kind; build and load just that net.
  bundle.build(cfg, 0, /*with_targets=*/false);
  json meta = json::parse(learn::read_checkpoint_meta(
      checkpoint_path, learn::kPolicyMagic));
  std::string kind_name = meta.at("robot_kind").get<std::string>();
  RobotKind kind = RobotKind::Lifting;
  bool found = false;
  for (RobotKind k : distinct_kinds(cfg.environment.team))
    if (kind_name == env::to_string(k)) {
      kind = k;
      found = true;
    }
  if (!found) throw std::runtime_error("checkpoint kind not in configured team: " + kind_name);
  auto params = bundle.online.at(kind)->fcn().params();
  learn::load_checkpoint(checkpoint_path, learn::kPolicyMagic, params);

  // Scene: first eval seed, the first agent of the checkpoint's kind, full
  // initial observation sweep.
  env::WorldState world = env::generate_environment(cfg.environment, cfg.eval_seeds.at(0));
  int agent_id = -1;
  for (const env::AgentState& a : world.agents)
    if (a.kind == kind && agent_id < 0) agent_id = a.id;
  if (agent_id < 0) throw std::runtime_error("no agent of the checkpoint's kind in the world");
  const env::AgentState& agent = world.agents[size_t(agent_id)];

  percept::AgentBelief belief(agent_id, world.grid.width(), world.grid.height(),
                              world.agents.size(), world.objects.size());
  std::vector<grid::CellCoord> all;
  for (int r = 0; r < world.grid.height(); ++r)
    for (int c = 0; c < world.grid.width(); ++c) all.push_back({c, r});
  percept::integrate_observation(belief, all, world);

  auto enc = percept::encode_intention({}, cfg.variant, agent.pose, cfg.out_size,
                                       int(world.agents.size()), world.grid.width(),
                                       world.grid.height());
  percept::StateTensor state = percept::build_state_tensor(belief, agent, enc, world.spec,
                                                           world.receptacle, cfg.out_size);

  json manifest;
  manifest["channels"] = json::array();
  for (size_t i = 0; i < state.channels.size(); ++i) {
    std::string name = "channel_" + std::to_string(i) + "_" + state.channel_names[i] + ".pgm";
    grid::write_pgm(state.channels[i], out_dir + "/" + name);
    manifest["channels"].push_back({{"index", i}, {"name", state.channel_names[i]},
                                    {"file", name}});
  }

  learn::QValueMap q = bundle.online.at(kind)->forward(state);
  learn::ActionIndex best = learn::argmax_action(q, 0);
  for (int c = 0; c < q.c; ++c) {
    grid::ScalarMap qmap(q.w, q.h);
    for (int y = 0; y < q.h; ++y)
      for (int x = 0; x < q.w; ++x) qmap.set(x, y, q.at(0, c, y, x));
    std::string name = "qmap_channel_" + std::to_string(c) + ".pgm";
    grid::write_pgm(qmap, out_dir + "/" + name);
    manifest["qmaps"].push_back({{"channel", c}, {"file", name}});
  }

  // Mark the argmax on a color copy of its channel.
  {
    grid::ScalarMap qmap(q.w, q.h);
    for (int y = 0; y < q.h; ++y)
      for (int x = 0; x < q.w; ++x) qmap.set(x, y, q.at(0, best.channel, y, x));
    float lo = qmap.values()[0], hi = qmap.values()[0];
    for (float v : qmap.values()) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    float span = hi > lo ? hi - lo : 1.0f;
    grid::RgbImage img(q.w, q.h);
    for (int y = 0; y < q.h; ++y)
      for (int x = 0; x < q.w; ++x) {
        uint8_t g = uint8_t(std::clamp((qmap.at(x, y) - lo) / span, 0.0f, 1.0f) * 255.0f + 0.5f);
        img.set(x, y, {g, g, g});
      }
    img.set(best.col, best.row, {255, 0, 0});  // selected action cell
    img.write_ppm(out_dir + "/qmap_argmax.ppm");
    manifest["argmax"] = {{"channel", best.channel}, {"row", best.row}, {"col", best.col}};
  }
  write_text(out_dir + "/render_manifest.json", manifest.dump(2));
  write_metadata(cfg, out_dir, json{{"mode", "render"}, {"checkpoint", checkpoint_path}});
}

void cmd_render_log(const std::string& trajectories_csv, const RunConfig& raw,
                    const std::string& out_dir) {
  raw.validate();
  RunConfig cfg = raw.resolved();
  fs::create_directories(out_dir);
  CsvTable table = read_csv(trajectories_csv);
  int ep_col = table.column("episode"), tick_col = table.column("tick"),
      id_col = table.column("id"), x_col = table.column("x"), y_col = table.column("y"),
      h_col = table.column("heading"), c_col = table.column("carrying");

  std::map<int, std::vector<coord::TrajectorySample>> by_episode;
  for (const auto& row : table.rows) {
    coord::TrajectorySample s;
    s.tick = std::stoll(row[size_t(tick_col)]);
    s.agent_id = std::stoi(row[size_t(id_col)]);
    s.x = std::stod(row[size_t(x_col)]);
    s.y = std::stod(row[size_t(y_col)]);
    s.heading = std::stod(row[size_t(h_col)]);
    s.carrying = row[size_t(c_col)] == "1";
    by_episode[std::stoi(row[size_t(ep_col)])].push_back(s);
  }
  for (auto& [episode, samples] : by_episode) {
    if (size_t(episode) >= cfg.eval_seeds.size())
      throw std::runtime_error("trajectory log references an episode outside the seed list");
    env::WorldState world =
        env::generate_environment(cfg.environment, cfg.eval_seeds[size_t(episode)]);
    render_trajectory_overlay(world, samples,
                              out_dir + "/overlay_" + std::to_string(episode) + ".ppm");
  }
  write_metadata(cfg, out_dir, json{{"mode", "render_log"}, {"log", trajectories_csv}});
}

}  // namespace intentsim::harness
