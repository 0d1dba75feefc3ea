#include "safegrid/harness/runner.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>

#include "safegrid/agents/checkpoint.hpp"
#include "safegrid/agents/trainer.hpp"
#include "safegrid/nn/grad_check.hpp"
#include "safegrid/nn/losses.hpp"
#include "safegrid/s2c/model.hpp"

namespace safegrid::harness {

namespace fs = std::filesystem;

namespace {

void write_json(const nlohmann::json& j, const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("runner: cannot write " + path.string());
  out << j.dump(2) << '\n';
}

nlohmann::json summary_json(const std::vector<SeedSummary>& summaries, long total_steps) {
  std::vector<double> success, ret, failures, cost_rate, half;
  nlohmann::json per_seed = nlohmann::json::array();
  for (const SeedSummary& s : summaries) {
    success.push_back(s.final_success_rate);
    ret.push_back(s.final_return);
    failures.push_back(static_cast<double>(s.total_failures));
    cost_rate.push_back(s.cost_rate);
    // "never reached" maps to total_steps + 1 so quartiles stay defined
    half.push_back(s.steps_to_half_success < 0 ? static_cast<double>(total_steps + 1)
                                               : static_cast<double>(s.steps_to_half_success));
    per_seed.push_back(to_json(s));
  }
  return {{"final_success_rate", to_json(quartiles(success))},
          {"final_return", to_json(quartiles(ret))},
          {"total_failures", to_json(quartiles(failures))},
          {"cost_rate", to_json(quartiles(cost_rate))},
          {"steps_to_half_success", to_json(quartiles(half))},
          {"per_seed", per_seed}};
}

agents::TransferSetup load_transfer(const ExperimentConfig& cfg) {
  agents::TransferSetup setup;
  if (!cfg.transfer.present) return setup;
  if (!cfg.transfer.s2c_checkpoint.empty()) {
    setup.s2c_init = s2c::S2cModel::load(cfg.transfer.s2c_checkpoint);
    setup.freeze_s2c = cfg.transfer.freeze;
  }
  if (!cfg.transfer.policy_checkpoint.empty()) {
    setup.policy_init = agents::load_qnet(cfg.transfer.policy_checkpoint).net;
  }
  return setup;
}

std::string sanitize(const std::string& value) {
  std::string out;
  for (char c : value) out += (std::isalnum(static_cast<unsigned char>(c)) ? c : '_');
  return out;
}

ExperimentConfig with_sweep_value(const ExperimentConfig& base, const std::string& value) {
  ExperimentConfig cfg = base;
  cfg.sweep = {};
  const std::string& p = base.sweep.parameter;
  try {
    if (p == "bin_width") {
      cfg.safety.bin_width = std::stoi(value);
    } else if (p == "horizon") {
      cfg.safety.horizon = std::stoi(value);
    } else if (p == "kind") {
      cfg.kind = agents::agent_kind_from_string(value);
    } else if (p == "water_penalty") {
      cfg.reward.water_penalty = std::stod(value);
    } else if (p == "lambda_init") {
      cfg.dqn.lambda_init = std::stod(value);
    } else if (p == "cost_budget") {
      cfg.dqn.cost_budget = std::stod(value);
    } else {
      throw ConfigError("sweep: unknown parameter '" + p + "'");
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError("sweep: bad value '" + value + "' for " + p + ": " + e.what());
  }
  try {
    cfg.validate();
  } catch (const ConfigError& e) {
    throw ConfigError("sweep value '" + value + "': " + e.what());
  }
  return cfg;
}

}  // namespace

RunResult run_experiment(const ExperimentConfig& cfg, const fs::path& out_dir) {
  cfg.validate();
  envs::IslandSuite suite = cfg.make_suite();
  agents::TransferSetup transfer = load_transfer(cfg);
  const bool has_transfer = transfer.s2c_init.has_value() || transfer.policy_init.has_value();

  fs::create_directories(out_dir);
  fs::create_directories(out_dir / "checkpoints");

  std::vector<std::uint64_t> seeds = cfg.seeds;
  std::sort(seeds.begin(), seeds.end());  // rows are ordered by (seed, env_step)

  RunResult result;
  try {
    for (std::uint64_t seed : seeds) {
      agents::TrainResult tr =
          agents::train_agent(cfg.kind, suite, cfg.reward, cfg.dqn, cfg.safety, seed,
                              cfg.total_steps, has_transfer ? &transfer : nullptr);
      result.log.rows.insert(result.log.rows.end(), tr.log.rows.begin(), tr.log.rows.end());
      result.summaries.push_back(summarize_seed(tr.log.rows, seed, cfg.total_steps));

      const std::string stem = "seed_" + std::to_string(seed);
      agents::save_qnet(tr.qnet, cfg.kind, out_dir / "checkpoints" / (stem + "_qnet.json"));
      if (tr.s2c) tr.s2c->save(out_dir / "checkpoints" / (stem + "_s2c.json"));
    }
  } catch (...) {
    write_csv(result.log, out_dir / "metrics.csv");  // flush partial logs
    throw;
  }

  write_csv(result.log, out_dir / "metrics.csv");

  result.report = {{"name", cfg.name},
                   {"kind", agents::to_string(cfg.kind)},
                   {"arm", cfg.arm()},
                   {"seeds", seeds},
                   {"total_steps", cfg.total_steps},
                   {"summary", summary_json(result.summaries, cfg.total_steps)}};
  nlohmann::json curves = nlohmann::json::array();
  for (const CurvePoint& p : aggregate_curves(result.log, seeds, cfg.total_steps)) {
    curves.push_back(to_json(p));
  }
  result.report["curves"] = std::move(curves);
  write_json(result.report, out_dir / "report.json");
  return result;
}

nlohmann::json run_ablation(const ExperimentConfig& cfg, const fs::path& out_dir) {
  if (!cfg.sweep.present) throw ConfigError("ablate: config has no [sweep] block");
  if (cfg.sweep.parameter != "bin_width" && cfg.sweep.parameter != "horizon" &&
      cfg.sweep.parameter != "kind") {
    throw ConfigError("ablate: sweep parameter must be bin_width, horizon, or kind");
  }
  fs::create_directories(out_dir);

  nlohmann::json runs = nlohmann::json::array();
  std::vector<std::pair<double, std::string>> ranking;  // (median final return, value)
  for (const std::string& value : cfg.sweep.values) {
    ExperimentConfig sub = with_sweep_value(cfg, value);
    sub.name = cfg.name + "/" + cfg.sweep.parameter + "=" + value;
    RunResult r = run_experiment(sub, out_dir / (cfg.sweep.parameter + "_" + sanitize(value)));
    std::vector<double> rets;
    for (const SeedSummary& s : r.summaries) rets.push_back(s.final_return);
    ranking.emplace_back(median(rets), value);
    nlohmann::json entry = {{"value", value},
                            {"bins", sub.safety.bins()},
                            {"kind", agents::to_string(sub.kind)}};
    entry["summary"] = r.report["summary"];
    runs.push_back(std::move(entry));
  }
  std::stable_sort(ranking.begin(), ranking.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  nlohmann::json order = nlohmann::json::array();
  for (const auto& [ret, value] : ranking) {
    nlohmann::json entry = {{"value", value}, {"median_final_return", ret}};
    order.push_back(std::move(entry));
  }
  nlohmann::json report = {{"name", cfg.name},
                           {"parameter", cfg.sweep.parameter},
                           {"runs", runs},
                           {"ranking_by_final_return", order}};
  write_json(report, out_dir / "report.json");
  return report;
}

nlohmann::json run_tradeoff(const ExperimentConfig& cfg, const fs::path& out_dir) {
  if (!cfg.sweep.present) throw ConfigError("tradeoff: config has no [sweep] block");
  if (cfg.sweep.parameter != "water_penalty" && cfg.sweep.parameter != "lambda_init" &&
      cfg.sweep.parameter != "cost_budget") {
    throw ConfigError("tradeoff: sweep parameter must be water_penalty, lambda_init, or cost_budget");
  }
  agents::AgentKind counterpart;
  if (cfg.kind == agents::AgentKind::dqn) {
    counterpart = agents::AgentKind::sr_dqn;
  } else if (cfg.kind == agents::AgentKind::lag_dqn) {
    counterpart = agents::AgentKind::sr_lag_dqn;
  } else {
    throw ConfigError("tradeoff: kind must be DQN or LAG_DQN (the SR counterpart is implied)");
  }
  fs::create_directories(out_dir);

  nlohmann::json rows = nlohmann::json::array();
  std::string csv =
      "kind,value,failures_q1,failures_median,failures_q3,return_q1,return_median,return_q3\n";
  for (agents::AgentKind kind : {cfg.kind, counterpart}) {
    for (const std::string& value : cfg.sweep.values) {
      ExperimentConfig sub = with_sweep_value(cfg, value);
      sub.kind = kind;
      sub.name = cfg.name + "/" + agents::to_string(kind) + "/" + cfg.sweep.parameter + "=" + value;
      RunResult r = run_experiment(
          sub, out_dir / (agents::to_string(kind) + "_" + sanitize(value)));
      std::vector<double> failures, rets;
      for (const SeedSummary& s : r.summaries) {
        failures.push_back(static_cast<double>(s.total_failures));
        rets.push_back(s.final_return);
      }
      Quartiles fq = quartiles(failures);
      Quartiles rq = quartiles(rets);
      nlohmann::json row = {{"kind", agents::to_string(kind)},
                            {"value", value},
                            {"total_failures", to_json(fq)},
                            {"final_return", to_json(rq)}};
      rows.push_back(std::move(row));
      csv += agents::to_string(kind) + "," + value + "," + format_double(fq.q1) + "," +
             format_double(fq.median) + "," + format_double(fq.q3) + "," + format_double(rq.q1) +
             "," + format_double(rq.median) + "," + format_double(rq.q3) + "\n";
    }
  }
  std::ofstream csv_out(out_dir / "tradeoff.csv", std::ios::binary);
  csv_out << csv;
  nlohmann::json report = {{"name", cfg.name},
                           {"parameter", cfg.sweep.parameter},
                           {"rows", rows}};
  write_json(report, out_dir / "report.json");
  return report;
}

int run_gradcheck(std::ostream& out, int nets_per_head, double tolerance) {
  Rng rng(20240901);
  double overall = 0.0;
  std::vector<double> layer_worst;
  auto track = [&](const nn::GradCheckReport& r) {
    overall = std::max(overall, r.max_rel_error);
    if (layer_worst.size() < r.per_layer.size()) layer_worst.resize(r.per_layer.size(), 0.0);
    for (std::size_t l = 0; l < r.per_layer.size(); ++l) {
      layer_worst[l] = std::max(layer_worst[l], r.per_layer[l]);
    }
  };

  const std::vector<int> q_dims = {12, 16, 8, 4};
  for (int n = 0; n < nets_per_head; ++n) {
    auto net = nn::make_mlp<double>(q_dims, nn::Head::linear, rng);
    Eigen::VectorXd input(q_dims.front());
    for (int i = 0; i < input.size(); ++i) input[i] = rng.uniform_real(-1.0, 1.0);
    nn::nudge_preactivations<double>(net, input);
    const int action = rng.uniform_int(q_dims.back());
    const double target = nn::forward<double>(net, input)[action] + 0.3;
    auto loss_fn = [&](const Eigen::VectorXd& q) {
      auto [loss, grad] = nn::huber_loss<double>(q[action], target, 1.0);
      Eigen::VectorXd g = Eigen::VectorXd::Zero(q.size());
      g[action] = grad;
      return std::make_pair(loss, g);
    };
    track(nn::grad_check<double>(net, loss_fn, input));
  }

  const std::vector<int> s2c_dims = {12, 16, 8, 10};
  for (int n = 0; n < nets_per_head; ++n) {
    auto net = nn::make_mlp<double>(s2c_dims, nn::Head::softmax, rng);
    Eigen::VectorXd input(s2c_dims.front());
    for (int i = 0; i < input.size(); ++i) input[i] = rng.uniform_real(-1.0, 1.0);
    nn::nudge_preactivations<double>(net, input);
    const int target = rng.uniform_int(s2c_dims.back());
    auto loss_fn = [&](const Eigen::VectorXd& probs) {
      auto r = nn::nll_loss<double>(probs, target);
      return std::make_pair(r.loss, r.grad_logits);
    };
    track(nn::grad_check<double>(net, loss_fn, input));
  }

  for (std::size_t l = 0; l < layer_worst.size(); ++l) {
    out << "layer " << l << " worst relative error: " << layer_worst[l] << "\n";
  }
  out << "max relative error: " << overall << " (tolerance " << tolerance << ")\n";
  const bool ok = overall <= tolerance;
  out << (ok ? "gradcheck: PASS" : "gradcheck: FAIL") << "\n";
  return ok ? 0 : 1;
}

}  // namespace safegrid::harness
