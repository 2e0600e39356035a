#include "corrclust/game.hpp"

#include <cmath>

#include "corrclust/error.hpp"
#include "corrclust/rng.hpp"

namespace cc {

namespace {

class AllOnesStrategy : public GameStrategy {
 public:
  void reset(int m) override {
    m_ = m;
    t_ = 0;
  }
  std::optional<GameMove> next() override {
    if (t_ >= m_) return std::nullopt;
    return GameMove{t_++, 1.0};
  }
  void observe(bool) override {}

 private:
  int m_ = 0;
  int t_ = 0;
};

class StopAtFirstLossStrategy : public GameStrategy {
 public:
  void reset(int m) override {
    m_ = m;
    t_ = 0;
    stopped_ = false;
  }
  std::optional<GameMove> next() override {
    if (stopped_ || t_ >= m_) return std::nullopt;
    return GameMove{t_++, 1.0};
  }
  void observe(bool win) override {
    if (!win) stopped_ = true;
  }

 private:
  int m_ = 0;
  int t_ = 0;
  bool stopped_ = false;
};

// Keeps playing the half of the board where it last won; a loss switches
// halves.  Pairs naturally with a two-element stake family indicating the
// halves.
class DoubleDownStrategy : public GameStrategy {
 public:
  void reset(int m) override {
    half_ = m / 2;
    next_low_ = 0;
    next_high_ = half_;
    m_ = m;
    use_low_ = true;
  }
  std::optional<GameMove> next() override {
    const bool low_left = next_low_ < half_;
    const bool high_left = next_high_ < m_;
    if (!low_left && !high_left) return std::nullopt;
    const bool low = use_low_ ? low_left : !high_left;
    return GameMove{low ? next_low_++ : next_high_++, 1.0};
  }
  void observe(bool win) override {
    if (!win) use_low_ = !use_low_;
  }

 private:
  int m_ = 0;
  int half_ = 0;
  int next_low_ = 0;
  int next_high_ = 0;
  bool use_low_ = true;
};

}  // namespace

std::unique_ptr<GameStrategy> make_strategy(const std::string& name) {
  if (name == "all-ones") return std::make_unique<AllOnesStrategy>();
  if (name == "stop-at-first-loss") return std::make_unique<StopAtFirstLossStrategy>();
  if (name == "double-down") return std::make_unique<DoubleDownStrategy>();
  throw InputError("unknown strategy '" + name + "'");
}

std::vector<std::string> strategy_names() {
  return {"all-ones", "stop-at-first-loss", "double-down"};
}

GameOutcome simulate_game(const GameConfig& config, std::uint64_t seed) {
  const auto strategy = make_strategy(config.strategy);
  return simulate_game(config, *strategy, seed);
}

GameOutcome simulate_game(const GameConfig& config, GameStrategy& strategy,
                          std::uint64_t seed) {
  if (config.m < 0) throw InputError("m must be nonnegative");
  if (!(config.epsilon >= 0.0 && config.epsilon < 0.5)) {
    throw InputError("epsilon must lie in [0, 0.5)");
  }
  if (config.trials < 1) throw InputError("trials must be positive");
  if (config.lambda < 0.0) throw InputError("lambda must be nonnegative");
  if (config.stakes.empty()) throw InputError("the stake family W must be nonempty");
  for (const auto& w : config.stakes) {
    if (static_cast<int>(w.size()) != config.m) {
      throw InputError("every stake vector must have m entries");
    }
    for (const double x : w) {
      if (!(x >= 0.0 && x <= 1.0)) throw InputError("stake entries must lie in [0, 1]");
    }
  }
  const int family = static_cast<int>(config.stakes.size());
  const double half_margin = (1.0 - 2.0 * config.epsilon) / 2.0;

  GameOutcome out;
  out.payoffs.reserve(config.trials);
  out.stake_masses.reserve(config.trials);
  out.events.reserve(config.trials);
  std::vector<double> payoff(family), stake(family);
  std::vector<char> played(config.m);

  for (std::int64_t trial = 0; trial < config.trials; ++trial) {
    CounterRng rng(seed, static_cast<std::uint64_t>(trial));
    strategy.reset(config.m);
    std::fill(payoff.begin(), payoff.end(), 0.0);
    std::fill(stake.begin(), stake.end(), 0.0);
    std::fill(played.begin(), played.end(), 0);
    for (int step = 0; step < config.m; ++step) {
      const std::optional<GameMove> move = strategy.next();
      if (!move) break;
      const auto [coord, cost] = *move;
      if (coord < 0 || coord >= config.m) {
        throw InputError("strategy picked a coordinate outside [0, m)");
      }
      if (played[coord]) throw InputError("strategy repeated a coordinate");
      if (!(cost >= 0.0 && cost <= 1.0)) throw InputError("strategy cost outside [0, 1]");
      played[coord] = 1;
      const bool win = rng.uniform() < config.epsilon;
      const double x = win ? 1.0 : -1.0;
      for (int i = 0; i < family; ++i) {
        const double mass = config.stakes[i][coord] * cost;
        stake[i] += mass;
        payoff[i] += x * mass;
      }
      strategy.observe(win);
    }
    bool event = false;
    for (int i = 0; i < family; ++i) {
      if (payoff[i] + half_margin * stake[i] >= 0.0 && stake[i] >= config.lambda) {
        event = true;
        break;
      }
    }
    out.payoffs.push_back(payoff[0]);
    out.stake_masses.push_back(stake[0]);
    out.events.push_back(event);
    if (event) ++out.event_count;
  }

  const double p = static_cast<double>(out.event_count) / static_cast<double>(config.trials);
  out.empirical_prob = p;
  out.std_err = std::sqrt(p * (1.0 - p) / static_cast<double>(config.trials));
  const double margin = 1.0 - 2.0 * config.epsilon;
  out.theoretical_bound = 2.0 * family * std::exp(-margin * margin * config.lambda / 5.0);
  return out;
}

}  // namespace cc
