#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <vector>

#include "corrclust/error.hpp"
#include "corrclust/game.hpp"
#include "oracles.hpp"

namespace {

cc::GameConfig all_ones_config(int m, double epsilon, double lambda, std::int64_t trials) {
  cc::GameConfig config;
  config.m = m;
  config.epsilon = epsilon;
  config.strategy = "all-ones";
  config.stakes = {std::vector<double>(m, 1.0)};
  config.trials = trials;
  config.lambda = lambda;
  return config;
}

class RepeatCoordinateStrategy : public cc::GameStrategy {
 public:
  void reset(int) override {}
  std::optional<cc::GameMove> next() override { return cc::GameMove{0, 1.0}; }
  void observe(bool) override {}
};

class OutOfRangeStrategy : public cc::GameStrategy {
 public:
  void reset(int m) override { m_ = m; }
  std::optional<cc::GameMove> next() override { return cc::GameMove{m_, 1.0}; }
  void observe(bool) override {}

 private:
  int m_ = 0;
};

class ExpensiveStrategy : public cc::GameStrategy {
 public:
  void reset(int) override { t_ = 0; }
  std::optional<cc::GameMove> next() override { return cc::GameMove{t_++, 1.5}; }
  void observe(bool) override {}

 private:
  int t_ = 0;
};

}  // namespace

TEST_CASE("single-coordinate game wins exactly when the coin does") {
  const double eps = 0.3;
  const cc::GameConfig config = all_ones_config(1, eps, 1.0, 20000);
  const cc::GameOutcome out = cc::simulate_game(config, 11);

  REQUIRE(out.payoffs.size() == 20000);
  REQUIRE(out.events.size() == 20000);
  std::int64_t wins = 0;
  for (std::size_t i = 0; i < out.payoffs.size(); ++i) {
    CHECK(out.stake_masses[i] == 1.0);
    const bool won = out.payoffs[i] == 1.0;
    if (!won) CHECK(out.payoffs[i] == -1.0);
    CHECK(static_cast<bool>(out.events[i]) == won);
    if (won) ++wins;
  }
  CHECK(out.event_count == wins);
  CHECK(out.empirical_prob == doctest::Approx(eps).epsilon(0.07));
  const double se = std::sqrt(eps * (1.0 - eps) / 20000.0);
  CHECK(std::abs(out.empirical_prob - eps) < 4.0 * se);
}

TEST_CASE("epsilon zero loses every coin") {
  const cc::GameConfig config = all_ones_config(25, 0.0, 5.0, 500);
  const cc::GameOutcome out = cc::simulate_game(config, 3);
  CHECK(out.event_count == 0);
  CHECK(out.empirical_prob == 0.0);
  CHECK(out.std_err == 0.0);
  for (double p : out.payoffs) CHECK(p == -25.0);
  for (double s : out.stake_masses) CHECK(s == 25.0);
}

TEST_CASE("all-ones payoff accounting") {
  const int m = 30;
  const cc::GameOutcome out = cc::simulate_game(all_ones_config(m, 0.25, 3.0, 2000), 7);
  for (std::size_t i = 0; i < out.payoffs.size(); ++i) {
    CHECK(out.stake_masses[i] == static_cast<double>(m));
    const double wins_twice = out.payoffs[i] + m;  // payoff = 2 wins - m
    CHECK(wins_twice >= 0.0);
    CHECK(wins_twice <= 2.0 * m);
    CHECK(std::fmod(wins_twice, 2.0) == 0.0);
  }
}

TEST_CASE("stop-at-first-loss stake mass matches the geometric series") {
  const int m = 12;
  const double eps = 0.4;
  cc::GameConfig config = all_ones_config(m, eps, 1.0, 40000);
  config.strategy = "stop-at-first-loss";
  const cc::GameOutcome out = cc::simulate_game(config, 19);

  double mean_stake = 0.0;
  for (std::size_t i = 0; i < out.stake_masses.size(); ++i) {
    const double s = out.stake_masses[i];
    mean_stake += s;
    CHECK(s >= 1.0);
    CHECK(s <= static_cast<double>(m));
    // Every stopped run ends with exactly one loss; a full board may end on
    // a win instead.
    const bool one_loss = out.payoffs[i] == s - 2.0;
    const bool perfect = s == static_cast<double>(m) && out.payoffs[i] == s;
    CHECK((one_loss || perfect));
  }
  mean_stake /= static_cast<double>(out.stake_masses.size());
  const double expected = (1.0 - std::pow(eps, m)) / (1.0 - eps);
  CHECK(std::abs(mean_stake - expected) < 0.03);
}

TEST_CASE("named strategies all complete a ten-coordinate game") {
  for (const std::string& name : cc::strategy_names()) {
    cc::GameConfig config = all_ones_config(10, 0.2, 2.0, 300);
    config.strategy = name;
    const cc::GameOutcome out = cc::simulate_game(config, 23);
    REQUIRE(out.payoffs.size() == 300);
    REQUIRE(out.events.size() == 300);
    for (std::size_t i = 0; i < out.payoffs.size(); ++i) {
      CHECK(std::abs(out.payoffs[i]) <= out.stake_masses[i] + 1e-12);
      CHECK(out.stake_masses[i] <= 10.0);
    }
    CHECK(out.empirical_prob ==
          doctest::Approx(static_cast<double>(out.event_count) / 300.0));
  }
  const std::vector<std::string> names = cc::strategy_names();
  CHECK(std::find(names.begin(), names.end(), "all-ones") != names.end());
  CHECK(std::find(names.begin(), names.end(), "stop-at-first-loss") != names.end());
  CHECK(std::find(names.begin(), names.end(), "double-down") != names.end());
}

TEST_CASE("empirical probability matches the exact binomial tail") {
  const int m = 40;
  const double eps = 0.3;
  const cc::GameConfig config = all_ones_config(m, eps, 10.0, 40000);
  const cc::GameOutcome out = cc::simulate_game(config, 101);

  // Event with the all-ones stake: 2W - m + (1-2eps)m/2 >= 0, so W >= 16.
  for (std::size_t i = 0; i < out.payoffs.size(); ++i) {
    const double wins = (out.payoffs[i] + m) / 2.0;
    CHECK(static_cast<bool>(out.events[i]) == (wins >= 16.0));
  }
  const double exact = oracle::binomial_tail_ge(m, eps, 16);
  const double se = std::sqrt(exact * (1.0 - exact) / 40000.0);
  CHECK(std::abs(out.empirical_prob - exact) < 5.0 * se);
  CHECK(out.theoretical_bound ==
        doctest::Approx(2.0 * std::exp(-0.16 * 10.0 / 5.0)).epsilon(1e-12));
  CHECK(out.std_err == doctest::Approx(std::sqrt(out.empirical_prob *
                                                 (1.0 - out.empirical_prob) / 40000.0))
                           .epsilon(1e-12));
}

TEST_CASE("the event maximizes over the stake family") {
  cc::GameConfig config = all_ones_config(6, 0.0, 0.0, 50);
  config.stakes.push_back(std::vector<double>(6, 0.0));
  const cc::GameOutcome out = cc::simulate_game(config, 2);
  // Every coin loses, so the all-ones vector never qualifies, but the zero
  // vector always does: payoff 0, stake 0 >= lambda 0.
  CHECK(out.empirical_prob == 1.0);
  for (double p : out.payoffs) CHECK(p == -6.0);  // reported under stakes[0]
}

TEST_CASE("a lambda above the reachable stake suppresses the event") {
  const cc::GameConfig config = all_ones_config(8, 0.45, 9.0, 400);
  const cc::GameOutcome out = cc::simulate_game(config, 5);
  CHECK(out.event_count == 0);
}

TEST_CASE("strategy protocol violations are rejected") {
  const cc::GameConfig config = all_ones_config(10, 0.2, 1.0, 5);
  RepeatCoordinateStrategy repeat;
  CHECK_THROWS_WITH_AS(cc::simulate_game(config, repeat, 1),
                       "strategy repeated a coordinate", cc::InputError);
  OutOfRangeStrategy out_of_range;
  CHECK_THROWS_AS(cc::simulate_game(config, out_of_range, 1), cc::InputError);
  ExpensiveStrategy expensive;
  CHECK_THROWS_AS(cc::simulate_game(config, expensive, 1), cc::InputError);
}

TEST_CASE("config validation") {
  const cc::GameConfig base = all_ones_config(4, 0.1, 1.0, 10);

  cc::GameConfig bad = base;
  bad.m = -1;
  CHECK_THROWS_AS(cc::simulate_game(bad, 1), cc::InputError);

  bad = base;
  bad.epsilon = 0.5;
  CHECK_THROWS_AS(cc::simulate_game(bad, 1), cc::InputError);
  bad.epsilon = -0.01;
  CHECK_THROWS_AS(cc::simulate_game(bad, 1), cc::InputError);

  bad = base;
  bad.trials = 0;
  CHECK_THROWS_AS(cc::simulate_game(bad, 1), cc::InputError);

  bad = base;
  bad.lambda = -2.0;
  CHECK_THROWS_AS(cc::simulate_game(bad, 1), cc::InputError);

  bad = base;
  bad.stakes.clear();
  CHECK_THROWS_AS(cc::simulate_game(bad, 1), cc::InputError);

  bad = base;
  bad.stakes = {{1.0, 1.0}};
  CHECK_THROWS_AS(cc::simulate_game(bad, 1), cc::InputError);

  bad = base;
  bad.stakes[0][2] = 1.5;
  CHECK_THROWS_AS(cc::simulate_game(bad, 1), cc::InputError);

  bad = base;
  bad.strategy = "martingale";
  CHECK_THROWS_AS(cc::simulate_game(bad, 1), cc::InputError);
  CHECK_THROWS_AS(cc::make_strategy("martingale"), cc::InputError);
}

TEST_CASE("simulation is deterministic in the seed") {
  const cc::GameConfig config = all_ones_config(16, 0.35, 4.0, 500);
  const cc::GameOutcome a = cc::simulate_game(config, 77);
  const cc::GameOutcome b = cc::simulate_game(config, 77);
  CHECK(a.payoffs == b.payoffs);
  CHECK(a.stake_masses == b.stake_masses);
  CHECK(a.events == b.events);
  CHECK(a.event_count == b.event_count);
  const cc::GameOutcome c = cc::simulate_game(config, 78);
  CHECK(a.payoffs != c.payoffs);
}
