#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "safegrid/harness/config.hpp"
#include "safegrid/harness/runner.hpp"

namespace {

struct CommonArgs {
  std::string config_path;
  std::string out_dir = "out";
  std::string seeds;
  long steps = 0;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("config", args.config_path, "Experiment config file")->required();
  cmd->add_option("--out-dir", args.out_dir, "Output directory");
  cmd->add_option("--seeds", args.seeds, "Override seeds (comma-separated)");
  cmd->add_option("--steps", args.steps, "Override total environment steps");
}

safegrid::harness::ExperimentConfig load_with_overrides(const CommonArgs& args) {
  auto cfg = safegrid::harness::load_experiment_config(args.config_path);
  if (!args.seeds.empty()) {
    cfg.seeds.clear();
    std::string item;
    std::istringstream in(args.seeds);
    while (std::getline(in, item, ',')) {
      if (!item.empty()) cfg.seeds.push_back(std::stoull(item));
    }
  }
  if (args.steps > 0) cfg.total_steps = args.steps;
  cfg.validate();
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gridworld lab for safety-augmented DQN training"};
  app.require_subcommand(1);

  CommonArgs train_args, transfer_args, ablate_args, tradeoff_args;
  CLI::App* train = app.add_subcommand("train", "Train one agent kind across seeds");
  add_common(train, train_args);
  CLI::App* transfer = app.add_subcommand("transfer", "Run a transfer arm from a checkpoint");
  add_common(transfer, transfer_args);
  CLI::App* ablate = app.add_subcommand("ablate", "One run per sweep value plus a combined report");
  add_common(ablate, ablate_args);
  CLI::App* tradeoff =
      app.add_subcommand("tradeoff", "Risk-reward sweep for a kind and its SR counterpart");
  add_common(tradeoff, tradeoff_args);
  app.add_subcommand("gradcheck", "Verify gradients against finite differences");

  CLI11_PARSE(app, argc, argv);

  try {
    if (train->parsed()) {
      auto cfg = load_with_overrides(train_args);
      auto result = safegrid::harness::run_experiment(cfg, train_args.out_dir);
      std::cout << "wrote " << train_args.out_dir << "/metrics.csv and report.json\n";
    } else if (transfer->parsed()) {
      auto cfg = load_with_overrides(transfer_args);
      if (!cfg.transfer.present) {
        throw safegrid::harness::ConfigError("transfer: config has no [transfer] block");
      }
      auto result = safegrid::harness::run_experiment(cfg, transfer_args.out_dir);
      std::cout << "arm " << cfg.arm() << ": wrote " << transfer_args.out_dir
                << "/metrics.csv and report.json\n";
    } else if (ablate->parsed()) {
      auto cfg = load_with_overrides(ablate_args);
      safegrid::harness::run_ablation(cfg, ablate_args.out_dir);
      std::cout << "wrote " << ablate_args.out_dir << "/report.json\n";
    } else if (tradeoff->parsed()) {
      auto cfg = load_with_overrides(tradeoff_args);
      safegrid::harness::run_tradeoff(cfg, tradeoff_args.out_dir);
      std::cout << "wrote " << tradeoff_args.out_dir << "/tradeoff.csv and report.json\n";
    } else {
      return safegrid::harness::run_gradcheck(std::cout);
    }
  } catch (const safegrid::harness::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
