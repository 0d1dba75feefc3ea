#include "doctest.h"

#include <cmath>
#include <deque>
#include <filesystem>

#include "safegrid/core/rng.hpp"
#include "safegrid/s2c/buffer.hpp"
#include "safegrid/s2c/config.hpp"
#include "safegrid/s2c/labeling.hpp"
#include "safegrid/s2c/model.hpp"

using namespace safegrid;
using namespace safegrid::s2c;

namespace {

Trajectory make_traj(int actions, bool failed, bool truncated = false) {
  Trajectory traj;
  for (int t = 0; t < actions; ++t) {
    Transition tr;
    tr.obs = Eigen::VectorXd::Constant(3, static_cast<double>(t));
    tr.reward = -0.01;
    if (t + 1 == actions) {
      if (truncated) {
        tr.truncated = true;
      } else {
        tr.terminal = true;
        tr.cost = failed ? 1 : 0;
      }
    }
    traj.transitions.push_back(tr);
  }
  traj.failed = failed;
  traj.succeeded = !failed && !truncated;
  return traj;
}

}  // namespace

TEST_CASE("label_trajectory") {
  SUBCASE("5-action failure counts down from 5") {
    auto labels = label_trajectory(make_traj(5, true), 40);
    REQUIRE(labels.size() == 5);
    for (int t = 0; t < 5; ++t) CHECK(labels[static_cast<std::size_t>(t)].delta == 5 - t);
  }
  SUBCASE("12-step success labels everything with the horizon") {
    auto labels = label_trajectory(make_traj(12, false), 40);
    REQUIRE(labels.size() == 12);
    for (const auto& l : labels) CHECK(l.delta == 40);
  }
  SUBCASE("60-action failure clips the first 20 labels at the horizon") {
    auto labels = label_trajectory(make_traj(60, true), 40);
    REQUIRE(labels.size() == 60);
    for (int t = 0; t < 20; ++t) CHECK(labels[static_cast<std::size_t>(t)].delta == 40);
    CHECK(labels[20].delta == 40);  // exactly at the horizon boundary
    for (int t = 21; t < 60; ++t) CHECK(labels[static_cast<std::size_t>(t)].delta == 60 - t);
    CHECK(labels.back().delta == 1);
  }
  SUBCASE("truncated episodes are labeled safe") {
    auto labels = label_trajectory(make_traj(7, false, true), 40);
    for (const auto& l : labels) CHECK(l.delta == 40);
  }
  SUBCASE("incomplete trajectories are a contract violation") {
    Trajectory open;
    Transition t;
    t.obs = Eigen::VectorXd::Zero(3);
    open.transitions.push_back(t);
    CHECK_THROWS_AS(label_trajectory(open, 40), std::logic_error);
  }
  SUBCASE("failing labels strictly decrease by one after the clip boundary") {
    for (int len : {3, 15, 80}) {
      auto labels = label_trajectory(make_traj(len, true), 40);
      for (std::size_t i = 1; i < labels.size(); ++i) {
        const int prev = labels[i - 1].delta;
        const int cur = labels[i].delta;
        if (prev < 40) CHECK(cur == prev - 1);
        CHECK(cur <= prev);
      }
    }
  }
}

TEST_CASE("bin_index") {
  SUBCASE("horizon 40, width 4") {
    CHECK(bin_index(1, 4, 40) == 0);
    CHECK(bin_index(4, 4, 40) == 0);
    CHECK(bin_index(5, 4, 40) == 1);
    CHECK(bin_index(40, 4, 40) == 9);
  }
  SUBCASE("width 1 is identity binning") {
    for (int d = 1; d <= 8; ++d) CHECK(bin_index(d, 1, 8) == d - 1);
  }
  SUBCASE("out-of-range deltas are rejected") {
    CHECK_THROWS_AS(bin_index(0, 4, 40), std::invalid_argument);
    CHECK_THROWS_AS(bin_index(41, 4, 40), std::invalid_argument);
  }
  SUBCASE("total and stable over the whole range") {
    for (int d = 1; d <= 40; ++d) {
      int b = bin_index(d, 4, 40);
      CHECK(b >= 0);
      CHECK(b <= 9);
      CHECK(bin_index(d, 4, 40) == b);
    }
  }
  SUBCASE("dedicated safe bin separates the sentinel") {
    SafetyConfig cfg;
    cfg.horizon = 40;
    cfg.bin_width = 4;
    cfg.dedicated_safe_bin = true;
    CHECK(cfg.bins() == 11);
    CHECK(cfg.bin_of(40) == 10);
    CHECK(cfg.bin_of(39) == 9);
    CHECK(cfg.bin_of(1) == 0);
  }
}

TEST_CASE("safety config validation") {
  SafetyConfig cfg;
  CHECK_NOTHROW(cfg.validate(100));
  cfg.bin_width = 3;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);  // 3 does not divide 40
  cfg.bin_width = 40;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);  // single bin
  cfg = SafetyConfig{};
  cfg.horizon = 120;
  cfg.bin_width = 4;
  CHECK_THROWS_AS(cfg.validate(100), std::invalid_argument);  // exceeds episode horizon
}

TEST_CASE("buffer is FIFO") {
  SUBCASE("overflow evicts the oldest entry") {
    S2cBuffer buf(3);
    for (int i = 0; i < 4; ++i) {
      buf.push(Eigen::VectorXd::Constant(1, static_cast<double>(i)), {i + 1});
    }
    CHECK(buf.size() == 3);
    CHECK(buf[0].obs[0] == doctest::Approx(1.0));
    CHECK(buf[2].obs[0] == doctest::Approx(3.0));
  }
  SUBCASE("order preserved under capacity") {
    S2cBuffer buf(10);
    for (int i = 0; i < 5; ++i) {
      buf.push(Eigen::VectorXd::Constant(1, static_cast<double>(i)), {i + 1});
    }
    CHECK(buf.size() == 5);
    for (int i = 0; i < 5; ++i) CHECK(buf[static_cast<std::size_t>(i)].label.delta == i + 1);
  }
  SUBCASE("ingest pairs states with labels in order") {
    S2cBuffer buf(100);
    Trajectory traj = make_traj(6, true);
    buf.ingest(traj, label_trajectory(traj, 40));
    CHECK(buf.size() == 6);
    CHECK(buf[0].label.delta == 6);
    CHECK(buf[5].label.delta == 1);
  }
  SUBCASE("misaligned labels are rejected") {
    S2cBuffer buf(100);
    Trajectory traj = make_traj(6, true);
    auto labels = label_trajectory(traj, 40);
    labels.pop_back();
    CHECK_THROWS_AS(buf.ingest(traj, labels), std::invalid_argument);
  }
  SUBCASE("randomized sequences match a reference queue") {
    Rng rng(17);
    for (int trial = 0; trial < 50; ++trial) {
      const std::size_t cap = static_cast<std::size_t>(1 + rng.uniform_int(8));
      S2cBuffer buf(cap);
      std::deque<int> model;
      const int ops = 40;
      for (int op = 0; op < ops; ++op) {
        int v = rng.uniform_int(1000) + 1;
        buf.push(Eigen::VectorXd::Constant(1, v), {1});
        model.push_back(v);
        if (model.size() > cap) model.pop_front();
        REQUIRE(buf.size() == model.size());
        for (std::size_t i = 0; i < model.size(); ++i) {
          REQUIRE(static_cast<int>(buf[i].obs[0]) == model[i]);
        }
      }
    }
  }
}

TEST_CASE("model predictions live on the simplex") {
  Rng rng(18);
  SafetyConfig cfg;
  S2cModel model(12, cfg, rng);
  CHECK(model.bins() == 10);
  for (int i = 0; i < 200; ++i) {
    Eigen::VectorXd obs(12);
    for (int j = 0; j < 12; ++j) obs[j] = rng.uniform_real(-5, 5);
    Eigen::VectorXd dist = model.predict(obs);
    CHECK(dist.size() == 10);
    CHECK(dist.sum() == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(dist.minCoeff() >= 0.0);
  }
}

TEST_CASE("untrained zero-weight model predicts uniform") {
  Rng rng(19);
  SafetyConfig cfg;
  S2cModel model(4, cfg, rng);
  for (auto& w : model.live_net().weights) w.setZero();
  for (auto& b : model.live_net().biases) b.setZero();
  model.snapshot();
  Eigen::VectorXd dist = model.predict(Eigen::VectorXd::Constant(4, 2.0));
  for (int i = 0; i < dist.size(); ++i) CHECK(dist[i] == doctest::Approx(0.1));
}

TEST_CASE("train_round overfits a single repeated pair") {
  Rng rng(20);
  SafetyConfig cfg;
  cfg.batch_size = 16;
  cfg.updates_per_round = 10;
  cfg.learning_rate = 1e-2;
  cfg.hidden_dims = {16, 16};
  S2cModel model(3, cfg, rng);
  S2cBuffer buf(64);
  for (int i = 0; i < 32; ++i) buf.push(Eigen::VectorXd::Constant(3, 0.5), {7});

  double first = model.train_round(buf, rng);
  double loss = first;
  double prev = first;
  int non_improving = 0;
  for (int round = 0; round < 50; ++round) {
    loss = model.train_round(buf, rng);
    if (loss >= prev) ++non_improving;
    prev = loss;
  }
  CHECK(loss < 0.01);
  CHECK(loss < first);
  CHECK(non_improving <= 5);  // allow adam wobble near convergence

  // The trained live net now puts its mode on the target bin.
  Eigen::VectorXd dist = model.predict(Eigen::VectorXd::Constant(3, 0.5), /*use_frozen=*/false);
  Eigen::Index mode;
  dist.maxCoeff(&mode);
  CHECK(static_cast<int>(mode) == cfg.bin_of(7));
}

TEST_CASE("train_round skips when the buffer is small") {
  Rng rng(21);
  SafetyConfig cfg;
  S2cModel model(3, cfg, rng);
  S2cBuffer buf(10);
  CHECK(std::isnan(model.train_round(buf, rng)));
}

TEST_CASE("snapshot freezes the augmentation view") {
  Rng rng(22);
  SafetyConfig cfg;
  cfg.batch_size = 8;
  cfg.updates_per_round = 2;
  S2cModel model(3, cfg, rng);
  S2cBuffer buf(32);
  for (int i = 0; i < 16; ++i) buf.push(Eigen::VectorXd::Constant(3, 1.0), {3});

  Eigen::VectorXd obs = Eigen::VectorXd::Constant(3, 1.0);
  model.snapshot();
  CHECK(model.predict(obs, true) == model.predict(obs, false));

  Eigen::VectorXd frozen_before = model.predict(obs, true);
  model.train_round(buf, rng);
  CHECK(model.predict(obs, true) == frozen_before);   // frozen unchanged by training
  CHECK(model.predict(obs, false) != frozen_before);  // live moved
  model.snapshot();
  CHECK(model.predict(obs, true) == model.predict(obs, false));
}

TEST_CASE("augment concatenates observation and distribution") {
  Eigen::VectorXd obs = Eigen::VectorXd::Constant(252, 0.5);
  Eigen::VectorXd dist = Eigen::VectorXd::Constant(10, 0.1);
  Eigen::VectorXd aug = augment(obs, dist);
  CHECK(aug.size() == 262);
  CHECK(aug.head(252) == obs);
  for (int i = 0; i < 10; ++i) CHECK(aug[252 + i] == doctest::Approx(0.1));

  SUBCASE("distinct observations stay distinct") {
    Eigen::VectorXd other = obs;
    other[100] = 0.75;
    CHECK(augment(obs, dist) != augment(other, dist));
  }
}

TEST_CASE("save/load round-trip") {
  Rng rng(23);
  SafetyConfig cfg;
  cfg.hidden_dims = {8, 8};
  S2cModel model(6, cfg, rng);
  auto path = std::filesystem::temp_directory_path() / "safegrid_s2c_test.json";
  model.save(path);

  SUBCASE("predictions reproduce bitwise") {
    S2cModel loaded = S2cModel::load(path);
    Eigen::VectorXd obs(6);
    for (int i = 0; i < 6; ++i) obs[i] = rng.uniform_real(-1, 1);
    CHECK(loaded.predict(obs) == model.predict(obs, /*use_frozen=*/false));
    CHECK(loaded.config().horizon == cfg.horizon);
  }
  SUBCASE("wrong observation dim is an explicit error") {
    CHECK_THROWS_WITH_AS(S2cModel::load(path, 9),
                         "s2c load: observation dim mismatch, expected 9 but checkpoint has 6",
                         std::invalid_argument);
  }
  SUBCASE("frozen models refuse training") {
    S2cModel loaded = S2cModel::load(path);
    loaded.set_trainable(false);
    S2cBuffer buf(2048);
    for (int i = 0; i < 600; ++i) buf.push(Eigen::VectorXd::Zero(6), {1});
    Rng r2(1);
    CHECK_THROWS_AS(loaded.train_round(buf, r2), std::logic_error);
  }
  std::filesystem::remove(path);
}

