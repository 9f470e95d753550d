// Command-line front end: train / eval / compare / render.
// Exit codes: 0 success, 1 configuration error, 2 runtime error.

#include <CLI11.hpp>
#include <cstdio>

#include "intentsim/harness/run.hpp"

namespace harness = intentsim::harness;
namespace percept = intentsim::percept;

namespace {

struct CommonArgs {
  std::string config_path;
  std::string out_dir = "out";
  std::optional<uint64_t> seed;
  std::string variant_override;
  std::string scale_override;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "Run configuration JSON")->required();
  cmd->add_option("--out", args.out_dir, "Output directory");
  cmd->add_option("--seed", args.seed, "Training seed override");
  cmd->add_option("--variant", args.variant_override,
                  "Intention variant override (e.g. ramp_path, none)");
  cmd->add_option("--scale", args.scale_override, "Network scale override (desk, full)");
}

harness::RunConfig resolve_config(const CommonArgs& args) {
  harness::RunConfig cfg = harness::load_run_config(args.config_path);
  if (!args.variant_override.empty())
    cfg.variant = percept::intention_variant_from_string(args.variant_override);
  if (!args.scale_override.empty())
    cfg.scale = intentsim::nn::scale_from_string(args.scale_override);
  if (args.seed) cfg.train_seed = args.seed;
  cfg.validate();
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Decentralized multi-robot foraging/rescue simulator and trainer"};
  app.require_subcommand(1);

  CommonArgs train_args, eval_args, compare_args, render_args;
  std::vector<std::string> eval_checkpoints;
  std::vector<std::string> compare_variants;
  int compare_jobs = 1;
  std::string render_checkpoint, render_log;

  CLI::App* train = app.add_subcommand("train", "Train one policy set");
  add_common(train, train_args);

  CLI::App* eval = app.add_subcommand("eval", "Evaluate checkpoints over the seed list");
  add_common(eval, eval_args);
  eval->add_option("--checkpoint", eval_checkpoints, "Checkpoint file(s), one per robot kind")
      ->required();

  CLI::App* compare = app.add_subcommand("compare", "Train and compare intention variants");
  add_common(compare, compare_args);
  compare->add_option("--variants", compare_variants, "Variant tags to compare")->required();
  compare->add_option("--jobs", compare_jobs, "Parallel training arms");

  CLI::App* render = app.add_subcommand("render", "Render state channels, Q-maps or trajectories");
  add_common(render, render_args);
  render->add_option("--checkpoint", render_checkpoint, "Policy checkpoint to visualize");
  render->add_option("--log", render_log, "trajectories.csv from an evaluation");

  CLI11_PARSE(app, argc, argv);

  try {
    if (train->parsed()) {
      harness::RunConfig cfg = resolve_config(train_args);
      harness::TrainResult res = harness::cmd_train(cfg, train_args.out_dir, train_args.seed);
      std::printf("trained %lld steps over %d episodes (seed %llu)\n",
                  (long long)res.stats.steps, res.stats.episodes,
                  (unsigned long long)res.seed_used);
      for (const auto& p : res.checkpoint_paths) std::printf("checkpoint: %s\n", p.c_str());
      for (const auto& p : res.predictor_paths) std::printf("predictor: %s\n", p.c_str());
    } else if (eval->parsed()) {
      harness::RunConfig cfg = resolve_config(eval_args);
      harness::EvalReport rep = harness::cmd_eval(eval_checkpoints, cfg, eval_args.out_dir);
      std::printf("episodes: %zu  objects removed: %.3f ± %.3f\n", rep.episodes.size(),
                  rep.mean_objects, rep.std_objects);
      std::printf("report: %s\n", rep.out_dir.c_str());
    } else if (compare->parsed()) {
      harness::RunConfig cfg = resolve_config(compare_args);
      std::vector<percept::IntentionVariant> variants;
      for (const std::string& v : compare_variants)
        variants.push_back(percept::intention_variant_from_string(v));
      harness::CompareResult res =
          harness::cmd_compare(variants, cfg, compare_args.out_dir, compare_jobs);
      for (const auto& arm : res.arms)
        std::printf("%-20s %.2f ± %.2f\n", percept::to_string(arm.variant), arm.mean,
                    arm.stddev);
      std::printf("table: %s\n", res.table_csv.c_str());
    } else if (render->parsed()) {
      harness::RunConfig cfg = resolve_config(render_args);
      if (render_checkpoint.empty() && render_log.empty())
        throw harness::ConfigError("render needs --checkpoint and/or --log");
      if (!render_checkpoint.empty())
        harness::cmd_render_checkpoint(render_checkpoint, cfg, render_args.out_dir);
      if (!render_log.empty())
        harness::cmd_render_log(render_log, cfg, render_args.out_dir);
      std::printf("renders: %s\n", render_args.out_dir.c_str());
    }
  } catch (const harness::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 1;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
