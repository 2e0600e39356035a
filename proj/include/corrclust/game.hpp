#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace cc {

/// One step of play: which coordinate to stake and at what cost in [0,1].
struct GameMove {
  int coordinate = 0;
  double cost = 1.0;
};

/// Pull-based betting strategy.  The simulator calls reset, then alternates
/// next / observe until next returns nullopt or m coordinates were played.
/// Strategies never see a coin before committing to a move.
class GameStrategy {
 public:
  virtual ~GameStrategy() = default;
  virtual void reset(int m) = 0;
  virtual std::optional<GameMove> next() = 0;
  virtual void observe(bool win) = 0;
};

struct GameConfig {
  int m = 0;
  double epsilon = 0.0;  ///< probability of X_t = +1
  std::string strategy = "all-ones";
  /// Explicit finite stake family; each vector has m entries in [0,1].
  std::vector<std::vector<double>> stakes;
  std::int64_t trials = 0;
  double lambda = 0.0;
};

struct GameOutcome {
  std::vector<double> payoffs;      ///< per trial: max over w of sum X_t w(e_t) c_t is NOT taken;
                                    ///< this is the payoff under the first stake vector
  std::vector<double> stake_masses; ///< per trial, under the first stake vector
  std::vector<bool> events;
  std::int64_t event_count = 0;
  double empirical_prob = 0.0;
  double theoretical_bound = 0.0;  ///< 2 |W| exp(-(1-2 eps)^2 lambda / 5)
  double std_err = 0.0;            ///< binomial standard error of empirical_prob
};

/// Runs config.trials independent games.  Per trial, the event is
///   exists w in W:  payoff_w + (1-2 eps)/2 * stake_w >= 0  and  stake_w >= lambda.
GameOutcome simulate_game(const GameConfig& config, std::uint64_t seed);

/// Same, but with a caller-supplied strategy; config.strategy is ignored.
GameOutcome simulate_game(const GameConfig& config, GameStrategy& strategy, std::uint64_t seed);

/// Named strategies: "all-ones" plays every coordinate in order at cost 1;
/// "stop-at-first-loss" quits after the first -1 coin; "double-down" replays
/// the half of the board where it last won and switches halves after a loss.
std::unique_ptr<GameStrategy> make_strategy(const std::string& name);
std::vector<std::string> strategy_names();

}  // namespace cc
