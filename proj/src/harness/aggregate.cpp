#include "safegrid/harness/aggregate.hpp"

#include <algorithm>
#include <cmath>
#include <nlohmann/json.hpp>
#include <stdexcept>

namespace safegrid::harness {

namespace {

double interpolated_quantile(const std::vector<double>& sorted, double p) {
  const std::size_t n = sorted.size();
  if (n == 1) return sorted[0];
  const double h = p * static_cast<double>(n - 1);
  const std::size_t lo = static_cast<std::size_t>(h);
  if (lo + 1 >= n) return sorted[n - 1];
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[lo + 1] - sorted[lo]);
}

}  // namespace

Quartiles quartiles(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("quartiles: empty input");
  std::sort(values.begin(), values.end());
  return {interpolated_quantile(values, 0.25), interpolated_quantile(values, 0.5),
          interpolated_quantile(values, 0.75)};
}

double median(std::vector<double> values) { return quartiles(std::move(values)).median; }

SeedSummary summarize_seed(const std::vector<EpisodeRow>& rows, std::uint64_t seed,
                           long total_steps) {
  SeedSummary s;
  s.seed = seed;
  std::vector<const EpisodeRow*> mine;
  for (const EpisodeRow& r : rows) {
    if (r.seed == seed) mine.push_back(&r);
  }
  s.episodes = static_cast<int>(mine.size());
  if (mine.empty()) return s;

  for (const EpisodeRow* r : mine) {
    if (r->failed) ++s.total_failures;
    s.total_cost += r->cost;
  }
  s.cost_rate = s.total_cost / static_cast<double>(total_steps);

  const std::size_t window = std::min<std::size_t>(kFinalWindow, mine.size());
  std::size_t succ = 0;
  double ret = 0.0;
  for (std::size_t i = mine.size() - window; i < mine.size(); ++i) {
    if (mine[i]->succeeded) ++succ;
    ret += mine[i]->episode_return;
  }
  s.final_success_rate = static_cast<double>(succ) / static_cast<double>(window);
  s.final_return = ret / static_cast<double>(window);

  // Rolling 50% success detection; eligible once a full window exists.
  int rolling = 0;
  for (std::size_t i = 0; i < mine.size(); ++i) {
    if (mine[i]->succeeded) ++rolling;
    if (i >= kFinalWindow) {
      if (mine[i - kFinalWindow]->succeeded) --rolling;
    }
    if (i + 1 >= kFinalWindow && 2 * rolling >= kFinalWindow) {
      s.steps_to_half_success = mine[i]->env_step;
      break;
    }
  }
  return s;
}

std::vector<CurvePoint> aggregate_curves(const MetricsLog& log,
                                         const std::vector<std::uint64_t>& seeds,
                                         long total_steps) {
  std::vector<CurvePoint> curve;
  for (long step = kCurveCheckpointEvery; step <= total_steps; step += kCurveCheckpointEvery) {
    CurvePoint point;
    point.env_step = step;
    std::vector<double> returns, successes, failures;
    for (std::uint64_t seed : seeds) {
      std::vector<const EpisodeRow*> done;
      for (const EpisodeRow& r : log.rows) {
        if (r.seed == seed && r.env_step <= step) done.push_back(&r);
      }
      if (done.empty()) continue;
      double fail_count = 0.0;
      for (const EpisodeRow* r : done) {
        if (r->failed) fail_count += 1.0;
      }
      const std::size_t rw = std::min<std::size_t>(kReturnWindow, done.size());
      double ret = 0.0;
      for (std::size_t i = done.size() - rw; i < done.size(); ++i) ret += done[i]->episode_return;
      const std::size_t sw = std::min<std::size_t>(kFinalWindow, done.size());
      double succ = 0.0;
      for (std::size_t i = done.size() - sw; i < done.size(); ++i) {
        if (done[i]->succeeded) succ += 1.0;
      }
      returns.push_back(ret / static_cast<double>(rw));
      successes.push_back(succ / static_cast<double>(sw));
      failures.push_back(fail_count);
    }
    if (returns.empty()) continue;
    point.rolling_return = quartiles(returns);
    point.rolling_success = quartiles(successes);
    point.cumulative_failures = quartiles(failures);
    curve.push_back(point);
  }
  return curve;
}

nlohmann::json to_json(const Quartiles& q) {
  return {{"q1", q.q1}, {"median", q.median}, {"q3", q.q3}};
}

nlohmann::json to_json(const SeedSummary& s) {
  return {{"seed", s.seed},
          {"episodes", s.episodes},
          {"final_success_rate", s.final_success_rate},
          {"final_return", s.final_return},
          {"total_failures", s.total_failures},
          {"total_cost", s.total_cost},
          {"cost_rate", s.cost_rate},
          {"steps_to_half_success", s.steps_to_half_success}};
}

nlohmann::json to_json(const CurvePoint& p) {
  return {{"env_step", p.env_step},
          {"return", to_json(p.rolling_return)},
          {"success", to_json(p.rolling_success)},
          {"failures", to_json(p.cumulative_failures)}};
}

}  // namespace safegrid::harness
