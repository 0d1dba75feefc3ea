#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "safegrid/harness/aggregate.hpp"
#include "safegrid/harness/config.hpp"
#include "safegrid/harness/metrics.hpp"
#include "safegrid/harness/runner.hpp"

using namespace safegrid;
using namespace safegrid::harness;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

fs::path fresh_dir(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / ("safegrid_" + name);
  fs::remove_all(dir);
  return dir;
}

const char* kTinyConfig =
    "[experiment]\n"
    "name = tiny\n"
    "kind = DQN\n"
    "seeds = 1\n"
    "total_steps = 1000\n"
    "\n"
    "[dqn]\n"
    "epsilon_decay_steps = 500\n"
    "hidden_dims = 16,16\n";

}  // namespace

TEST_CASE("config parsing") {
  SUBCASE("defaults plus overrides") {
    ExperimentConfig cfg = parse_experiment_config(kTinyConfig);
    CHECK(cfg.name == "tiny");
    CHECK(cfg.kind == agents::AgentKind::dqn);
    CHECK(cfg.seeds == std::vector<std::uint64_t>{1});
    CHECK(cfg.total_steps == 1000);
    CHECK(cfg.dqn.epsilon_decay_steps == 500);
    CHECK(cfg.dqn.hidden_dims == std::vector<int>{16, 16});
    CHECK(cfg.dqn.gamma == doctest::Approx(0.99));  // untouched default
    CHECK(cfg.safety.horizon == 40);
  }
  SUBCASE("unknown keys are named errors") {
    CHECK_THROWS_WITH_AS(parse_experiment_config("[experiment]\nnam = x\n"),
                         "config: unknown key 'nam' in [experiment]", ConfigError);
    CHECK_THROWS_AS(parse_experiment_config("[experimen]\nname = x\n"), ConfigError);
    CHECK_THROWS_AS(parse_experiment_config("name = x\n"), ConfigError);
    CHECK_THROWS_AS(parse_experiment_config("[dqn]\ngamma = fast\n"), ConfigError);
  }
  SUBCASE("validation failures") {
    CHECK_THROWS_AS(parse_experiment_config("[experiment]\nseeds = 1,1\n"), ConfigError);
    CHECK_THROWS_AS(parse_experiment_config("[experiment]\ntotal_steps = 0\n"), ConfigError);
    CHECK_THROWS_AS(parse_experiment_config("[safety]\nbin_width = 3\n"), ConfigError);
    CHECK_THROWS_AS(
        parse_experiment_config("[transfer]\ns2c_checkpoint = x.json\nfreeze = true\nfinetune = true\n"),
        ConfigError);
  }
  SUBCASE("comments and blank lines are ignored") {
    ExperimentConfig cfg = parse_experiment_config(
        "# a comment\n\n[experiment]\n# another\nname = ok\n");
    CHECK(cfg.name == "ok");
  }
  SUBCASE("transfer arms") {
    ExperimentConfig cfg = parse_experiment_config(
        "[transfer]\ns2c_checkpoint = s.json\nfreeze = true\n");
    CHECK(cfg.arm() == "s2c_frozen");
    cfg = parse_experiment_config(
        "[transfer]\ns2c_checkpoint = s.json\npolicy_checkpoint = p.json\nfinetune = true\n");
    CHECK(cfg.arm() == "policy+s2c_finetuned");
    cfg = parse_experiment_config(kTinyConfig);
    CHECK(cfg.arm() == "no_transfer");
  }
}

TEST_CASE("csv formatting") {
  MetricsLog log;
  EpisodeRow r;
  r.seed = 3;
  r.episode = 0;
  r.env_step = 12;
  r.episode_return = -0.25;
  r.length = 12;
  r.cost = 1.0;
  r.failed = true;
  r.succeeded = false;
  r.epsilon = 0.5;
  r.lambda = 0.0;
  r.has_s2c_loss = false;
  log.rows.push_back(r);
  r.has_s2c_loss = true;
  r.s2c_loss = std::numeric_limits<double>::quiet_NaN();
  log.rows.push_back(r);

  std::string csv = to_csv(log);
  std::istringstream lines(csv);
  std::string header, row1, row2;
  std::getline(lines, header);
  std::getline(lines, row1);
  std::getline(lines, row2);
  CHECK(header == "seed,episode,env_step,return,length,cost,failed,succeeded,epsilon,lambda,s2c_loss");
  CHECK(row1 == "3,0,12,-0.25,12,1,1,0,0.5,0,");
  CHECK(row2 == "3,0,12,-0.25,12,1,1,0,0.5,0,nan");
}

TEST_CASE("format_double round-trips") {
  for (double v : {0.1, -1.0 / 3.0, 1e-17, 123456.789, 0.0}) {
    CHECK(std::stod(format_double(v)) == v);
  }
}

TEST_CASE("quartiles") {
  Quartiles q = quartiles({5, 1, 3, 2, 4});
  CHECK(q.median == doctest::Approx(3.0));
  CHECK(q.q1 == doctest::Approx(2.0));
  CHECK(q.q3 == doctest::Approx(4.0));
  CHECK(median({2.0}) == doctest::Approx(2.0));
  CHECK(median({1.0, 2.0}) == doctest::Approx(1.5));
  CHECK_THROWS_AS(quartiles({}), std::invalid_argument);
}

TEST_CASE("summarize_seed computes exact counts") {
  std::vector<EpisodeRow> rows;
  for (int e = 0; e < 10; ++e) {
    EpisodeRow r;
    r.seed = 1;
    r.episode = e;
    r.env_step = (e + 1) * 10;
    r.episode_return = e < 5 ? -1.0 : 1.0;
    r.cost = e < 3 ? 1.0 : 0.0;
    r.failed = e < 3;
    r.succeeded = e >= 5;
    rows.push_back(r);
  }
  SeedSummary s = summarize_seed(rows, 1, 100);
  CHECK(s.episodes == 10);
  CHECK(s.total_failures == 3);
  CHECK(s.cost_rate == doctest::Approx(0.03));
  CHECK(s.final_success_rate == doctest::Approx(0.5));
  CHECK(s.final_return == doctest::Approx(0.0));
}

TEST_CASE("run_experiment writes the full artifact set") {
  ExperimentConfig cfg = parse_experiment_config(kTinyConfig);
  fs::path dir = fresh_dir("run");
  RunResult result = run_experiment(cfg, dir);

  CHECK(fs::exists(dir / "metrics.csv"));
  CHECK(fs::exists(dir / "report.json"));
  CHECK(fs::exists(dir / "checkpoints" / "seed_1_qnet.json"));

  std::string csv = slurp(dir / "metrics.csv");
  CHECK(csv.rfind("seed,episode,env_step,return,length,cost,failed,succeeded,epsilon,lambda,s2c_loss\n",
                  0) == 0);
  CHECK(result.report["kind"] == "DQN");
  CHECK(result.report["arm"] == "no_transfer");
  CHECK(result.report["summary"]["per_seed"].size() == 1);
  fs::remove_all(dir);
}

TEST_CASE("rerunning an identical config reproduces metrics.csv bitwise") {
  ExperimentConfig cfg = parse_experiment_config(kTinyConfig);
  fs::path d1 = fresh_dir("det1"), d2 = fresh_dir("det2");
  run_experiment(cfg, d1);
  run_experiment(cfg, d2);
  CHECK(slurp(d1 / "metrics.csv") == slurp(d2 / "metrics.csv"));
  fs::remove_all(d1);
  fs::remove_all(d2);
}

TEST_CASE("multi-seed report aggregates over exactly the seed set") {
  ExperimentConfig cfg = parse_experiment_config(kTinyConfig);
  cfg.seeds = {3, 1, 2};
  cfg.total_steps = 600;
  fs::path dir = fresh_dir("seeds");
  RunResult result = run_experiment(cfg, dir);
  CHECK(result.report["summary"]["per_seed"].size() == 3);
  CHECK(result.report["seeds"] == std::vector<std::uint64_t>{1, 2, 3});
  // Rows are ordered by (seed, env_step).
  std::uint64_t prev_seed = 0;
  long prev_step = 0;
  for (const EpisodeRow& r : result.log.rows) {
    if (r.seed != prev_seed) {
      CHECK(r.seed > prev_seed);
      prev_seed = r.seed;
      prev_step = 0;
    }
    CHECK(r.env_step > prev_step);
    prev_step = r.env_step;
  }
  fs::remove_all(dir);
}

TEST_CASE("transfer run records the arm and freezes parameters") {
  // Train a tiny SR model first to get a checkpoint.
  ExperimentConfig src = parse_experiment_config(kTinyConfig);
  src.kind = agents::AgentKind::sr_dqn;
  src.total_steps = 700;
  src.safety.batch_size = 64;
  src.safety.train_every = 200;
  src.safety.updates_per_round = 2;
  src.safety.snapshot_every = 200;
  fs::path src_dir = fresh_dir("xfer_src");
  run_experiment(src, src_dir);
  fs::path ckpt = src_dir / "checkpoints" / "seed_1_s2c.json";
  REQUIRE(fs::exists(ckpt));

  ExperimentConfig dst = src;
  dst.transfer.present = true;
  dst.transfer.s2c_checkpoint = ckpt.string();
  dst.transfer.freeze = true;
  fs::path dst_dir = fresh_dir("xfer_dst");
  RunResult result = run_experiment(dst, dst_dir);
  CHECK(result.report["arm"] == "s2c_frozen");

  // Frozen arm: the safety parameters on disk after the run equal the source.
  CHECK(slurp(ckpt) == slurp(dst_dir / "checkpoints" / "seed_1_s2c.json"));

  // Finetuned arm: parameters move and the loss column fills in.
  dst.transfer.freeze = false;
  dst.transfer.finetune = true;
  fs::path ft_dir = fresh_dir("xfer_ft");
  RunResult ft = run_experiment(dst, ft_dir);
  CHECK(ft.report["arm"] == "s2c_finetuned");
  CHECK(slurp(ckpt) != slurp(ft_dir / "checkpoints" / "seed_1_s2c.json"));
  bool saw_loss = false;
  for (const EpisodeRow& r : ft.log.rows) {
    if (r.has_s2c_loss && !std::isnan(r.s2c_loss)) saw_loss = true;
  }
  CHECK(saw_loss);

  fs::remove_all(src_dir);
  fs::remove_all(dst_dir);
  fs::remove_all(ft_dir);
}

TEST_CASE("ablation sweep produces one run per value and a combined report") {
  ExperimentConfig cfg = parse_experiment_config(kTinyConfig);
  cfg.kind = agents::AgentKind::sr_dqn;
  cfg.total_steps = 400;
  cfg.safety.batch_size = 32;
  cfg.safety.train_every = 200;
  cfg.safety.updates_per_round = 1;
  cfg.sweep.present = true;
  cfg.sweep.parameter = "bin_width";
  cfg.sweep.values = {"1", "2", "4", "8"};
  fs::path dir = fresh_dir("ablate");
  nlohmann::json report = run_ablation(cfg, dir);
  REQUIRE(report["runs"].size() == 4);
  CHECK(report["runs"][0]["bins"] == 40);
  CHECK(report["runs"][1]["bins"] == 20);
  CHECK(report["runs"][2]["bins"] == 10);
  CHECK(report["runs"][3]["bins"] == 5);
  CHECK(report["ranking_by_final_return"].size() == 4);
  CHECK(fs::exists(dir / "bin_width_1" / "metrics.csv"));

  SUBCASE("invalid sweep values are named errors") {
    cfg.sweep.values = {"3"};  // does not divide 40
    CHECK_THROWS_AS(run_ablation(cfg, fresh_dir("ablate_bad")), ConfigError);
  }
  fs::remove_all(dir);
}

TEST_CASE("tradeoff sweep runs the kind and its SR counterpart") {
  ExperimentConfig cfg = parse_experiment_config(kTinyConfig);
  cfg.total_steps = 400;
  cfg.safety.batch_size = 32;
  cfg.safety.train_every = 200;
  cfg.safety.updates_per_round = 1;
  cfg.sweep.present = true;
  cfg.sweep.parameter = "water_penalty";
  cfg.sweep.values = {"-0.5", "-1"};
  fs::path dir = fresh_dir("tradeoff");
  nlohmann::json report = run_tradeoff(cfg, dir);
  REQUIRE(report["rows"].size() == 4);  // 2 kinds x 2 values
  std::string csv = slurp(dir / "tradeoff.csv");
  CHECK(csv.rfind("kind,value,", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);  // header + 4 rows

  SUBCASE("SR kinds cannot anchor a tradeoff sweep") {
    cfg.kind = agents::AgentKind::sr_dqn;
    CHECK_THROWS_AS(run_tradeoff(cfg, fresh_dir("tradeoff_bad")), ConfigError);
  }
  fs::remove_all(dir);
}

TEST_CASE("gradcheck passes and reports per-layer errors") {
  std::ostringstream out;
  CHECK(run_gradcheck(out, 3) == 0);
  CHECK(out.str().find("layer 0 worst relative error") != std::string::npos);
  CHECK(out.str().find("PASS") != std::string::npos);
}

TEST_CASE("a missing transfer checkpoint fails before any training") {
  ExperimentConfig cfg = parse_experiment_config(kTinyConfig);
  cfg.transfer.present = true;
  cfg.transfer.s2c_checkpoint = "does_not_exist.json";
  cfg.transfer.freeze = true;
  cfg.kind = agents::AgentKind::sr_dqn;
  fs::path dir = fresh_dir("fail");
  CHECK_THROWS(run_experiment(cfg, dir));
  fs::remove_all(dir);
}

