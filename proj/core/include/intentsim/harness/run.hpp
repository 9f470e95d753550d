#pragma once

#include "intentsim/harness/config.hpp"

namespace intentsim::harness {

struct TrainStats {
  int64_t steps = 0;
  int64_t prefill_steps = 0;
  int episodes = 0;
  std::vector<int64_t> sync_steps;
  std::vector<int64_t> gradient_steps;
};

struct TrainResult {
  std::vector<std::string> checkpoint_paths;  // final checkpoints, one per robot kind
  std::vector<std::string> predictor_paths;   // Predicted variant only
  std::string log_path;
  std::string trace_path;
  TrainStats stats;
  uint64_t seed_used = 0;
};

/// Trains one policy set for the configured team: prefill with a random
/// policy for total/40 steps, then the scheduled loop (train every 4th
/// step, target sync every 1000th, checkpoints every total/10). Emits the
/// training log, a schedule trace, and per-robot-type checkpoints under
/// out_dir.
TrainResult cmd_train(const RunConfig& config, const std::string& out_dir,
                      std::optional<uint64_t> seed_override = std::nullopt);

struct EvalEpisodeRow {
  int episode = 0;
  uint64_t seed = 0;
  int objects_removed = 0;
  int obstacle_collisions = 0;
  int agent_collisions = 0;
  double total_return = 0.0;
  double total_distance = 0.0;
  int64_t ticks = 0;
  int64_t decisions = 0;
};

struct EvalReport {
  std::vector<EvalEpisodeRow> episodes;
  std::vector<uint64_t> seeds;
  double mean_objects = 0.0;
  double std_objects = 0.0;  // population standard deviation
  std::string out_dir;
};

/// Greedy evaluation (epsilon 0.01) over the configured seed list with a
/// fixed tick budget. Writes episodes/agents/events/trajectories/summary
/// CSVs, per-episode trajectory renders, and a metadata sidecar. The
/// summary is recomputed from the episodes CSV on disk.
EvalReport cmd_eval(const std::vector<std::string>& checkpoints, const RunConfig& config,
                    const std::string& out_dir, bool write_renders = true);

/// Aggregation guard used by comparisons: refuses reports whose seed lists
/// differ.
void require_same_seeds(const std::vector<EvalReport>& reports);

struct CompareArm {
  percept::IntentionVariant variant;
  std::vector<double> run_means;  // mean objects removed, one per training run
  double mean = 0.0;
  double stddev = 0.0;
};

struct CompareResult {
  std::vector<CompareArm> arms;  // in the documented fixed variant order
  std::string table_csv;
};

/// Trains config.train_runs policies per requested variant (seeds derived
/// from the config seed), evaluates every run on the shared eval seed list,
/// and writes a one-row comparison table whose columns follow the fixed
/// variant order. `jobs` > 1 runs arms in parallel processes of work.
CompareResult cmd_compare(std::vector<percept::IntentionVariant> variants,
                          const RunConfig& config, const std::string& out_dir, int jobs = 1);

/// State-channel and Q-map renders for a checkpoint on the first eval seed.
void cmd_render_checkpoint(const std::string& checkpoint_path, const RunConfig& config,
                           const std::string& out_dir);

/// Trajectory overlays (one PPM per episode) from a trajectories CSV.
void cmd_render_log(const std::string& trajectories_csv, const RunConfig& config,
                    const std::string& out_dir);

/// Random-policy baseline: evaluation with epsilon 1 on the shared seeds.
EvalReport run_random_baseline(const RunConfig& config, const std::string& out_dir);

}  // namespace intentsim::harness
