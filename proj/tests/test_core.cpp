#include "doctest.h"

#include <stdexcept>

#include "safegrid/core/rng.hpp"
#include "safegrid/core/types.hpp"

using namespace safegrid;

namespace {

Trajectory make_traj(const std::vector<double>& rewards, const std::vector<int>& costs = {},
                     bool terminal = true, bool truncated = false) {
  Trajectory traj;
  for (std::size_t i = 0; i < rewards.size(); ++i) {
    Transition t;
    t.reward = rewards[i];
    t.cost = costs.empty() ? 0 : costs[i];
    if (i + 1 == rewards.size()) {
      t.terminal = terminal;
      t.truncated = truncated;
    }
    traj.transitions.push_back(t);
  }
  return traj;
}

}  // namespace

TEST_CASE("discounted_return matches hand-computed sums") {
  CHECK(discounted_return(make_traj({1, 1, 1}), 0.5) == doctest::Approx(1.75));
  CHECK(discounted_return(make_traj({3.5}), 0.9) == doctest::Approx(3.5));
  CHECK(discounted_return(make_traj({0, 0, 5}), 0.9) == doctest::Approx(4.05));
}

TEST_CASE("discounted_return with gamma 0 equals the first reward") {
  for (auto rewards : {std::vector<double>{2, -1, 7}, {-0.5}, {0, 0, 0, 9}}) {
    CHECK(discounted_return(make_traj(rewards), 0.0) == doctest::Approx(rewards.front()));
  }
}

TEST_CASE("discounted_cost") {
  CHECK(discounted_cost(make_traj({0, 0, 0}, {0, 0, 1}), 0.99) == doctest::Approx(0.9801));
  CHECK(discounted_cost(make_traj({0, 0}, {0, 0}), 0.9) == doctest::Approx(0.0));
  CHECK(discounted_cost(make_traj({0, 0}, {1, 1}), 0.5) == doctest::Approx(1.5));
}

TEST_CASE("discounted_cost is monotone in each cost entry") {
  double base = discounted_cost(make_traj({0, 0, 0}, {0, 1, 0}), 0.8);
  double more = discounted_cost(make_traj({0, 0, 0}, {1, 1, 0}), 0.8);
  CHECK(more > base);
}

TEST_CASE("empty or ill-formed inputs are rejected") {
  Trajectory empty;
  CHECK_THROWS_AS(discounted_return(empty, 0.9), std::invalid_argument);
  CHECK_THROWS_AS(discounted_cost(empty, 0.9), std::invalid_argument);
  CHECK_THROWS_AS(summarize(empty), std::invalid_argument);
  CHECK_THROWS_AS(discounted_return(make_traj({1}), 1.0), std::invalid_argument);
  CHECK_THROWS_AS(discounted_return(make_traj({1}), -0.1), std::invalid_argument);
}

TEST_CASE("summarize") {
  SUBCASE("successful episode") {
    Trajectory traj = make_traj({-0.01, -0.01, 1.0});
    traj.succeeded = true;
    EpisodeMetrics m = summarize(traj);
    CHECK(m.episode_return == doctest::Approx(0.98));
    CHECK(m.length == 3);
    CHECK(m.succeeded);
    CHECK_FALSE(m.failed);
  }
  SUBCASE("failure into water") {
    Trajectory traj = make_traj({-0.01, -1.0}, {0, 1});
    traj.failed = true;
    EpisodeMetrics m = summarize(traj);
    CHECK(m.failed);
    CHECK(m.episode_cost == doctest::Approx(1.0));
  }
  SUBCASE("truncated episode") {
    Trajectory traj = make_traj({-0.01, -0.01}, {}, false, true);
    EpisodeMetrics m = summarize(traj);
    CHECK_FALSE(m.failed);
    CHECK_FALSE(m.succeeded);
    CHECK(m.length == 2);
  }
  SUBCASE("episode_cost equals the integer count of cost-1 transitions") {
    Trajectory traj = make_traj({0, 0, 0, 0}, {1, 0, 1, 1});
    CHECK(summarize(traj).episode_cost == doctest::Approx(3.0));
  }
}

TEST_CASE("rng streams are deterministic and independent") {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.next() == b.next());

  // Substreams depend only on the original seed, not on consumption.
  Rng c(7);
  Rng c_env = c.stream(1);
  for (int i = 0; i < 50; ++i) c.next();
  Rng c_env_again = Rng(7).stream(1);
  for (int i = 0; i < 20; ++i) CHECK(c_env.next() == c_env_again.next());

  Rng d(7);
  CHECK(d.stream(1).next() != d.stream(2).next());
}

TEST_CASE("rng uniform maps stay in range") {
  Rng rng(123);
  for (int i = 0; i < 1000; ++i) {
    int v = rng.uniform_int(4);
    CHECK(v >= 0);
    CHECK(v < 4);
    double u = rng.uniform01();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}
