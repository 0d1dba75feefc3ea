#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "safegrid/agents/dqn.hpp"
#include "safegrid/envs/island.hpp"
#include "safegrid/s2c/config.hpp"

namespace safegrid::harness {

/// Raised for malformed or invalid experiment configs (CLI exit code 2).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Declarative run description, parsed from a strict key-value text format:
/// `[section]` headers, `key = value` lines, `#` comments. Unknown sections
/// or keys are errors so a typo cannot silently invalidate an experiment.
struct ExperimentConfig {
  // [experiment]
  std::string name = "experiment";
  agents::AgentKind kind = agents::AgentKind::dqn;
  std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5};
  long total_steps = 50000;
  std::string env_suite = "builtin";  // "builtin" or comma-separated layout files
  std::vector<int> env_variants;      // optional subset of the suite

  agents::DqnConfig dqn;      // [dqn]
  s2c::SafetyConfig safety;   // [safety]
  envs::RewardScheme reward;  // [reward]

  struct Transfer {
    bool present = false;
    std::string s2c_checkpoint;
    std::string policy_checkpoint;
    bool freeze = false;
    bool finetune = false;
  } transfer;

  struct Sweep {
    bool present = false;
    std::string parameter;
    std::vector<std::string> values;
  } sweep;

  void validate() const;
  envs::IslandSuite make_suite() const;

  /// Transfer arm label: no_transfer, s2c_frozen, s2c_finetuned, or the
  /// policy+s2c variants.
  std::string arm() const;
};

ExperimentConfig parse_experiment_config(const std::string& text);
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

}  // namespace safegrid::harness
