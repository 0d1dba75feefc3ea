#include "safegrid/harness/config.hpp"

#include <fstream>
#include <sstream>

namespace safegrid::harness {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> parts;
  std::istringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) parts.push_back(item);
  }
  return parts;
}

long parse_long(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    long out = std::stol(v, &used);
    if (used != v.size()) throw std::invalid_argument("trailing");
    return out;
  } catch (const std::exception&) {
    throw ConfigError("config: key '" + key + "' expects an integer, got '" + v + "'");
  }
}

int parse_int(const std::string& key, const std::string& v) {
  return static_cast<int>(parse_long(key, v));
}

double parse_real(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    double out = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument("trailing");
    return out;
  } catch (const std::exception&) {
    throw ConfigError("config: key '" + key + "' expects a number, got '" + v + "'");
  }
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ConfigError("config: key '" + key + "' expects true/false, got '" + v + "'");
}

std::vector<int> parse_int_list(const std::string& key, const std::string& v) {
  std::vector<int> out;
  for (const auto& item : split_list(v)) out.push_back(parse_int(key, item));
  if (out.empty()) throw ConfigError("config: key '" + key + "' expects a non-empty list");
  return out;
}

}  // namespace

ExperimentConfig parse_experiment_config(const std::string& text) {
  ExperimentConfig cfg;
  std::string section;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;

  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = trim(raw);
    if (line.empty() || line[0] == '#') continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ConfigError("config line " + std::to_string(line_no) + ": malformed section header");
      }
      section = line.substr(1, line.size() - 2);
      if (section != "experiment" && section != "dqn" && section != "safety" &&
          section != "reward" && section != "transfer" && section != "sweep") {
        throw ConfigError("config: unknown section '" + section + "'");
      }
      if (section == "transfer") cfg.transfer.present = true;
      if (section == "sweep") cfg.sweep.present = true;
      continue;
    }
    std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
    }
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (section.empty()) {
      throw ConfigError("config: key '" + key + "' appears before any section");
    }

    if (section == "experiment") {
      if (key == "name") {
        cfg.name = value;
      } else if (key == "kind") {
        try {
          cfg.kind = agents::agent_kind_from_string(value);
        } catch (const std::invalid_argument& e) {
          throw ConfigError(std::string("config: ") + e.what());
        }
      } else if (key == "seeds") {
        cfg.seeds.clear();
        for (const auto& s : split_list(value)) {
          cfg.seeds.push_back(static_cast<std::uint64_t>(parse_long(key, s)));
        }
      } else if (key == "total_steps") {
        cfg.total_steps = parse_long(key, value);
      } else if (key == "env_suite") {
        cfg.env_suite = value;
      } else if (key == "env_variants") {
        cfg.env_variants = parse_int_list(key, value);
      } else {
        throw ConfigError("config: unknown key '" + key + "' in [experiment]");
      }
    } else if (section == "dqn") {
      if (key == "gamma") cfg.dqn.gamma = parse_real(key, value);
      else if (key == "epsilon_start") cfg.dqn.epsilon_start = parse_real(key, value);
      else if (key == "epsilon_end") cfg.dqn.epsilon_end = parse_real(key, value);
      else if (key == "epsilon_decay_steps") cfg.dqn.epsilon_decay_steps = parse_long(key, value);
      else if (key == "replay_capacity") cfg.dqn.replay_capacity = parse_int(key, value);
      else if (key == "batch_size") cfg.dqn.batch_size = parse_int(key, value);
      else if (key == "target_update_every") cfg.dqn.target_update_every = parse_long(key, value);
      else if (key == "learn_every") cfg.dqn.learn_every = parse_long(key, value);
      else if (key == "learning_rate") cfg.dqn.learning_rate = parse_real(key, value);
      else if (key == "hidden_dims") cfg.dqn.hidden_dims = parse_int_list(key, value);
      else if (key == "huber_delta") cfg.dqn.huber_delta = parse_real(key, value);
      else if (key == "reset_every") cfg.dqn.reset_every = parse_long(key, value);
      else if (key == "lambda_init") cfg.dqn.lambda_init = parse_real(key, value);
      else if (key == "lagrange_eta") cfg.dqn.lagrange_eta = parse_real(key, value);
      else if (key == "cost_budget") cfg.dqn.cost_budget = parse_real(key, value);
      else if (key == "v1_window_episodes") cfg.dqn.v1_window_episodes = parse_int(key, value);
      else throw ConfigError("config: unknown key '" + key + "' in [dqn]");
    } else if (section == "safety") {
      if (key == "horizon") cfg.safety.horizon = parse_int(key, value);
      else if (key == "bin_width") cfg.safety.bin_width = parse_int(key, value);
      else if (key == "buffer_capacity") cfg.safety.buffer_capacity = parse_int(key, value);
      else if (key == "batch_size") cfg.safety.batch_size = parse_int(key, value);
      else if (key == "train_every") cfg.safety.train_every = parse_int(key, value);
      else if (key == "updates_per_round") cfg.safety.updates_per_round = parse_int(key, value);
      else if (key == "snapshot_every") cfg.safety.snapshot_every = parse_int(key, value);
      else if (key == "learning_rate") cfg.safety.learning_rate = parse_real(key, value);
      else if (key == "dedicated_safe_bin") cfg.safety.dedicated_safe_bin = parse_bool(key, value);
      else if (key == "hidden_dims") cfg.safety.hidden_dims = parse_int_list(key, value);
      else throw ConfigError("config: unknown key '" + key + "' in [safety]");
    } else if (section == "reward") {
      if (key == "step") cfg.reward.step_reward = parse_real(key, value);
      else if (key == "goal") cfg.reward.goal_reward = parse_real(key, value);
      else if (key == "water") cfg.reward.water_penalty = parse_real(key, value);
      else if (key == "step_limit") cfg.reward.step_limit = parse_int(key, value);
      else if (key == "slip_prob") cfg.reward.slip_prob = parse_real(key, value);
      else if (key == "gt_normalize") cfg.reward.normalize_gt = parse_bool(key, value);
      else throw ConfigError("config: unknown key '" + key + "' in [reward]");
    } else if (section == "transfer") {
      if (key == "s2c_checkpoint") cfg.transfer.s2c_checkpoint = value;
      else if (key == "policy_checkpoint") cfg.transfer.policy_checkpoint = value;
      else if (key == "freeze") cfg.transfer.freeze = parse_bool(key, value);
      else if (key == "finetune") cfg.transfer.finetune = parse_bool(key, value);
      else throw ConfigError("config: unknown key '" + key + "' in [transfer]");
    } else if (section == "sweep") {
      if (key == "parameter") cfg.sweep.parameter = value;
      else if (key == "values") cfg.sweep.values = split_list(value);
      else throw ConfigError("config: unknown key '" + key + "' in [sweep]");
    }
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_experiment_config(buf.str());
}

void ExperimentConfig::validate() const {
  if (seeds.empty()) throw ConfigError("config: seeds must be non-empty");
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    for (std::size_t j = i + 1; j < seeds.size(); ++j) {
      if (seeds[i] == seeds[j]) throw ConfigError("config: seeds must be distinct");
    }
  }
  if (total_steps <= 0) throw ConfigError("config: total_steps must be positive");
  try {
    dqn.validate();
    safety.validate(reward.step_limit);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  if (reward.step_limit <= 0) throw ConfigError("config: step_limit must be positive");
  if (reward.slip_prob < 0.0 || reward.slip_prob >= 1.0) {
    throw ConfigError("config: slip_prob must lie in [0, 1)");
  }
  if (transfer.present) {
    if (transfer.freeze && transfer.finetune) {
      throw ConfigError("config: transfer cannot both freeze and finetune");
    }
    if (!transfer.s2c_checkpoint.empty() && !transfer.freeze && !transfer.finetune) {
      throw ConfigError("config: transfer with a checkpoint must set freeze or finetune");
    }
  }
  if (sweep.present) {
    if (sweep.values.empty()) throw ConfigError("config: sweep values must be non-empty");
    if (sweep.parameter != "bin_width" && sweep.parameter != "horizon" &&
        sweep.parameter != "kind" && sweep.parameter != "water_penalty" &&
        sweep.parameter != "lambda_init" && sweep.parameter != "cost_budget") {
      throw ConfigError("config: unknown sweep parameter '" + sweep.parameter + "'");
    }
  }
}

envs::IslandSuite ExperimentConfig::make_suite() const {
  envs::IslandSuite suite;
  if (env_suite == "builtin") {
    suite = envs::builtin_island_suite();
  } else {
    std::vector<std::filesystem::path> paths;
    std::istringstream in(env_suite);
    std::string item;
    while (std::getline(in, item, ',')) {
      item = trim(item);
      if (!item.empty()) paths.emplace_back(item);
    }
    try {
      suite = envs::load_island_suite(paths);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("config: ") + e.what());
    }
  }
  if (!env_variants.empty()) {
    try {
      suite = envs::select_variants(suite, env_variants);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("config: ") + e.what());
    }
  }
  return suite;
}

std::string ExperimentConfig::arm() const {
  if (!transfer.present || transfer.s2c_checkpoint.empty()) return "no_transfer";
  std::string arm = transfer.policy_checkpoint.empty() ? "s2c" : "policy+s2c";
  arm += transfer.freeze ? "_frozen" : "_finetuned";
  return arm;
}

}  // namespace safegrid::harness
