#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "intentsim/harness/csv.hpp"
#include "intentsim/harness/run.hpp"

namespace fs = std::filesystem;
namespace harness = intentsim::harness;
namespace percept = intentsim::percept;
using harness::RunConfig;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  EXPECT_TRUE(bool(in)) << path;
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string micro_config_json(const std::string& extra = "") {
  return R"({
    "environment": {
      "layout": "SmallEmpty", "task": "search_and_rescue",
      "dims": [6, 6], "num_objects": 2, "team": "1R"
    },
    "variant": "ramp_path", "scale": "desk", "out_size": 9,
    "sensor": {"fov": 6.283185307179586, "range": 8.0},
    "train": {"total_steps": 120},
    "train_seed": 5,
    "eval_seeds": [3, 4, 5],
    "eval_tick_budget": 40)" +
         extra + "\n}";
}

std::string temp_dir(const std::string& tag) {
  std::string d = testing::TempDir() + "harness_" + tag;
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

}  // namespace

TEST(Config, ParsesResolvesAndEchoes) {
  RunConfig cfg = harness::run_config_from_json(micro_config_json());
  RunConfig r = cfg.resolved();
  EXPECT_EQ(r.environment.interior_width, 6);
  EXPECT_DOUBLE_EQ(r.train.gamma, 0.35);  // rescue task default
  EXPECT_EQ(r.eval_seeds.size(), 3u);
  std::string echo = harness::run_config_to_json(cfg);
  EXPECT_NE(echo.find("\"gamma\": 0.35"), std::string::npos);
  EXPECT_NE(echo.find("ramp_path"), std::string::npos);
}

TEST(Config, ForagingDefaultsGamma) {
  std::string text = R"({
    "environment": {"layout": "SmallDivider", "task": "foraging", "team": "2L"}
  })";
  RunConfig cfg = harness::run_config_from_json(text);
  EXPECT_DOUBLE_EQ(cfg.resolved().train.gamma, 0.85);
  EXPECT_EQ(cfg.resolved().environment.num_objects, 10);
}

TEST(Config, ErrorsAreConfigErrors) {
  EXPECT_THROW(harness::run_config_from_json("{not json"), harness::ConfigError);
  EXPECT_THROW(harness::run_config_from_json(R"({"environment":{"layout":"Nowhere"}})"),
               harness::ConfigError);
  // Unknown variant names the valid tags.
  try {
    harness::run_config_from_json(
        R"({"environment":{"layout":"SmallEmpty","team":"2L"},"variant":"telepathy"})");
    FAIL() << "expected a config error";
  } catch (const harness::ConfigError& e) {
    std::string msg = e.what();
    EXPECT_NE(msg.find("ramp_path"), std::string::npos);
    EXPECT_NE(msg.find("none"), std::string::npos);
  }
}

TEST(CmdTrain, MicroRunEmitsCheckpointLogAndTrace) {
  RunConfig cfg = harness::run_config_from_json(micro_config_json());
  std::string out = temp_dir("train");
  harness::TrainResult res = harness::cmd_train(cfg, out);
  EXPECT_EQ(res.stats.steps, 120);
  EXPECT_EQ(res.stats.prefill_steps, 3);  // 120 / 40
  ASSERT_EQ(res.checkpoint_paths.size(), 1u);
  EXPECT_TRUE(fs::exists(res.checkpoint_paths[0]));
  EXPECT_TRUE(fs::exists(out + "/metadata.json"));

  // Gradient steps happen only at multiples of the train frequency, after
  // the prefill.
  harness::CsvTable trace = harness::read_csv(res.trace_path);
  int prefill_end = -1;
  for (const auto& row : trace.rows) {
    if (row[1] == "train") {
      int64_t step = std::stoll(row[0]);
      EXPECT_EQ(step % 4, 0);
      EXPECT_GT(step, res.stats.prefill_steps);
    }
    if (row[1] == "prefill_end") prefill_end = int(std::stoll(row[0]));
    if (row[1] == "checkpoint") EXPECT_EQ(std::stoll(row[0]) % 12, 0);  // total/10
  }
  EXPECT_EQ(prefill_end, 3);
  EXPECT_FALSE(res.stats.gradient_steps.empty());

  harness::CsvTable log = harness::read_csv(res.log_path);
  EXPECT_EQ(log.header[0], "step");
  EXPECT_FALSE(log.rows.empty());
}

TEST(CmdTrain, TwoKindTeamGetsTwoCheckpointsAndIsolatedBuffers) {
  std::string text = R"({
    "environment": {"layout": "SmallEmpty", "task": "foraging",
                    "dims": [8, 8], "num_objects": 3, "team": "1L+1P"},
    "variant": "ramp_path", "scale": "desk", "out_size": 9,
    "train": {"total_steps": 80},
    "train_seed": 9,
    "eval_seeds": [1],
    "eval_tick_budget": 30
  })";
  RunConfig cfg = harness::run_config_from_json(text);
  std::string out = temp_dir("two_kinds");
  harness::TrainResult res = harness::cmd_train(cfg, out);
  ASSERT_EQ(res.checkpoint_paths.size(), 2u);  // one per robot type
  bool lifting = false, pushing = false;
  for (const auto& p : res.checkpoint_paths) {
    lifting = lifting || p.find("lifting") != std::string::npos;
    pushing = pushing || p.find("pushing") != std::string::npos;
  }
  EXPECT_TRUE(lifting);
  EXPECT_TRUE(pushing);
}

TEST(CmdEval, DeterministicBitIdenticalOutputs) {
  RunConfig cfg = harness::run_config_from_json(micro_config_json());
  std::string train_out = temp_dir("eval_train");
  harness::TrainResult tr = harness::cmd_train(cfg, train_out);

  std::string a = temp_dir("eval_a"), b = temp_dir("eval_b");
  harness::EvalReport ra = harness::cmd_eval(tr.checkpoint_paths, cfg, a);
  harness::EvalReport rb = harness::cmd_eval(tr.checkpoint_paths, cfg, b);
  EXPECT_EQ(ra.mean_objects, rb.mean_objects);
  for (const std::string& name :
       {"episodes.csv", "agents.csv", "events.csv", "trajectories.csv", "summary.csv",
        "trajectory_0.ppm", "trajectory_1.ppm", "trajectory_2.ppm"}) {
    EXPECT_EQ(slurp(a + "/" + name), slurp(b + "/" + name)) << name;
  }
}

TEST(CmdEval, SummaryRecomputesFromEpisodeRows) {
  RunConfig cfg = harness::run_config_from_json(micro_config_json());
  std::string train_out = temp_dir("sum_train");
  harness::TrainResult tr = harness::cmd_train(cfg, train_out);
  std::string out = temp_dir("sum_eval");
  harness::cmd_eval(tr.checkpoint_paths, cfg, out);

  harness::CsvTable episodes = harness::read_csv(out + "/episodes.csv");
  int col = episodes.column("objects_removed");
  double mean = 0.0;
  for (const auto& row : episodes.rows) mean += std::stod(row[size_t(col)]);
  mean /= double(episodes.rows.size());
  double var = 0.0;
  for (const auto& row : episodes.rows) {
    double v = std::stod(row[size_t(col)]);
    var += (v - mean) * (v - mean);
  }
  var /= double(episodes.rows.size());

  harness::CsvTable summary = harness::read_csv(out + "/summary.csv");
  bool found = false;
  for (const auto& row : summary.rows)
    if (row[0] == "objects_removed") {
      EXPECT_EQ(std::stod(row[1]), mean);
      EXPECT_EQ(std::stod(row[2]), std::sqrt(var));
      found = true;
    }
  EXPECT_TRUE(found);
}

TEST(CmdEval, MismatchedCheckpointIsLoadError) {
  RunConfig cfg = harness::run_config_from_json(micro_config_json());
  std::string train_out = temp_dir("mismatch_train");
  harness::TrainResult tr = harness::cmd_train(cfg, train_out);

  // Evaluate with a config whose team kind differs from the checkpoint's.
  std::string other_text = R"({
    "environment": {"layout": "SmallEmpty", "task": "foraging",
                    "dims": [6, 6], "num_objects": 2, "team": "1L"},
    "out_size": 9, "eval_seeds": [3], "eval_tick_budget": 20
  })";
  RunConfig other = harness::run_config_from_json(other_text);
  EXPECT_THROW(harness::cmd_eval(tr.checkpoint_paths, other, temp_dir("mismatch_eval")),
               std::runtime_error);
  // Missing checkpoint for a present kind is also a load error.
  EXPECT_THROW(harness::cmd_eval({}, other, temp_dir("mismatch_eval2")), std::runtime_error);
}

TEST(Compare, HeaderFollowsDocumentedVariantOrder) {
  std::string text = R"({
    "environment": {"layout": "SmallEmpty", "task": "search_and_rescue",
                    "dims": [6, 6], "num_objects": 1, "team": "1R"},
    "out_size": 9, "scale": "desk",
    "sensor": {"fov": 6.283185307179586, "range": 8.0},
    "train": {"total_steps": 80},
    "train_seed": 11,
    "eval_seeds": [2, 3],
    "eval_tick_budget": 25,
    "train_runs": 1
  })";
  RunConfig cfg = harness::run_config_from_json(text);
  std::string out = temp_dir("compare");
  // Requested out of order; the table must follow the documented order.
  harness::CompareResult res = harness::cmd_compare(
      {percept::IntentionVariant::None, percept::IntentionVariant::RampPath}, cfg, out, 2);
  harness::CsvTable table = harness::read_csv(res.table_csv);
  ASSERT_EQ(table.header.size(), 3u);
  EXPECT_EQ(table.header[0], "environment");
  EXPECT_EQ(table.header[1], "ramp_path");
  EXPECT_EQ(table.header[2], "none");
  ASSERT_EQ(table.rows.size(), 1u);
  EXPECT_NE(table.rows[0][0].find("SmallEmpty"), std::string::npos);
}

TEST(Compare, RefusesMismatchedSeedLists) {
  harness::EvalReport a, b;
  a.seeds = {1, 2, 3};
  b.seeds = {1, 2, 4};
  EXPECT_THROW(harness::require_same_seeds({a, b}), harness::ConfigError);
  b.seeds = a.seeds;
  EXPECT_NO_THROW(harness::require_same_seeds({a, b}));
}

TEST(CmdRender, ChannelAndQmapRendersAreDeterministic) {
  RunConfig cfg = harness::run_config_from_json(micro_config_json());
  std::string train_out = temp_dir("render_train");
  harness::TrainResult tr = harness::cmd_train(cfg, train_out);

  std::string a = temp_dir("render_a"), b = temp_dir("render_b");
  harness::cmd_render_checkpoint(tr.checkpoint_paths[0], cfg, a);
  harness::cmd_render_checkpoint(tr.checkpoint_paths[0], cfg, b);
  for (const auto& entry : fs::directory_iterator(a)) {
    std::string name = entry.path().filename().string();
    if (name == "metadata.json") continue;
    EXPECT_EQ(slurp(a + "/" + name), slurp(b + "/" + name)) << name;
  }
  EXPECT_TRUE(fs::exists(a + "/render_manifest.json"));
  EXPECT_TRUE(fs::exists(a + "/qmap_argmax.ppm"));

  // Trajectory overlays from an eval log.
  std::string eval_out = temp_dir("render_eval");
  harness::cmd_eval(tr.checkpoint_paths, cfg, eval_out, /*write_renders=*/false);
  std::string ro = temp_dir("render_overlays");
  harness::cmd_render_log(eval_out + "/trajectories.csv", cfg, ro);
  EXPECT_TRUE(fs::exists(ro + "/overlay_0.ppm"));
}

TEST(Baseline, RandomPolicyRunsAndReports) {
  RunConfig cfg = harness::run_config_from_json(micro_config_json());
  std::string out = temp_dir("baseline");
  harness::EvalReport rep = harness::run_random_baseline(cfg, out);
  EXPECT_EQ(rep.episodes.size(), 3u);
  EXPECT_TRUE(fs::exists(out + "/episodes.csv"));
}
