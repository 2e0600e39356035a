#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <unistd.h>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "corrclust/error.hpp"
#include "corrclust/instance.hpp"
#include "oracles.hpp"

namespace {

cc::CostedGraph complete_graph(int n, double cost = 1.0) {
  cc::CostedGraph g;
  g.n = n;
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) g.edges.push_back({u, v, cost});
  }
  return g;
}

std::filesystem::path scratch_file(const std::string& name) {
  static const std::filesystem::path dir = [] {
    auto d = std::filesystem::temp_directory_path() /
             ("corrclust-instance-" + std::to_string(::getpid()));
    std::filesystem::create_directories(d);
    return d;
  }();
  return dir / name;
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

bool same_edges(const cc::Instance& a, const cc::Instance& b) {
  if (a.vertex_count() != b.vertex_count() || a.edge_count() != b.edge_count()) return false;
  for (std::size_t i = 0; i < a.edge_count(); ++i) {
    const cc::EdgeRecord& x = a.edge(i);
    const cc::EdgeRecord& y = b.edge(i);
    if (x.u != y.u || x.v != y.v || x.cost != y.cost || x.sign != y.sign) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("instance validates and sorts edges") {
  std::vector<cc::EdgeRecord> edges{{1, 2, 1.0, cc::Sign::minus}, {0, 2, 0.5, cc::Sign::plus}};
  cc::Instance inst(3, std::move(edges));
  REQUIRE(inst.edge_count() == 2);
  CHECK(inst.edge(0).u == 0);
  CHECK(inst.edge(0).v == 2);
  CHECK(inst.edge(1).u == 1);
  CHECK(inst.find_edge(2, 0) == 0);  // lookup accepts either endpoint order
  CHECK(inst.find_edge(0, 2) == 0);
  CHECK(inst.find_edge(0, 1) == -1);
  CHECK(inst.total_cost() == 1.5);

  CHECK_THROWS_AS(cc::Instance(3, {{0, 0, 1.0, cc::Sign::plus}}), cc::InputError);
  CHECK_THROWS_AS(cc::Instance(3, {{2, 0, 1.0, cc::Sign::plus}}), cc::InputError);
  CHECK_THROWS_AS(cc::Instance(3, {{0, 3, 1.0, cc::Sign::plus}}), cc::InputError);
  CHECK_THROWS_AS(cc::Instance(3, {{0, 1, 1.5, cc::Sign::plus}}), cc::InputError);
  CHECK_THROWS_AS(cc::Instance(3,
                               {{0, 1, 1.0, cc::Sign::plus}, {0, 1, 1.0, cc::Sign::minus}}),
                  cc::InputError);
}

TEST_CASE("clustering invariants and densify") {
  cc::Clustering c({0, 1, 0, 2});
  CHECK(c.cluster_count() == 3);
  CHECK(c.cluster_sizes() == std::vector<std::int32_t>{2, 1, 1});
  CHECK(c.clusters()[0] == std::vector<std::int32_t>{0, 2});

  CHECK_THROWS_AS(cc::Clustering({0, 2}), cc::InputError);       // id 1 empty
  CHECK_THROWS_AS(cc::Clustering({-1, 0}), cc::InputError);

  cc::Clustering d = cc::Clustering::densify({3, 3, 2, 3});
  CHECK(d.labels() == std::vector<std::int32_t>{0, 0, 1, 0});
  CHECK(d == cc::Clustering({0, 0, 1, 0}));
  CHECK_THROWS_AS(cc::Clustering::densify({5, 5, 7, 5}), cc::InputError);
  CHECK_THROWS_AS(cc::Clustering::densify({0, -1}), cc::InputError);

  cc::EdgeRecord within{0, 2, 1.0, cc::Sign::plus};
  cc::EdgeRecord across{0, 1, 1.0, cc::Sign::plus};
  CHECK(cc::edge_consistent(within, c));
  CHECK_FALSE(cc::edge_consistent(across, c));
  across.sign = cc::Sign::minus;
  CHECK(cc::edge_consistent(across, c));
}

TEST_CASE("near_equal_clusters appends remainders to the last clusters") {
  CHECK(cc::near_equal_clusters(10, 4).cluster_sizes() ==
        std::vector<std::int32_t>{2, 2, 3, 3});
  CHECK(cc::near_equal_clusters(8, 2).cluster_sizes() == std::vector<std::int32_t>{4, 4});
  CHECK(cc::near_equal_clusters(5, 5).cluster_sizes() ==
        std::vector<std::int32_t>{1, 1, 1, 1, 1});
  CHECK_THROWS_AS(cc::near_equal_clusters(3, 4), cc::InputError);
  CHECK_THROWS_AS(cc::near_equal_clusters(0, 1), cc::InputError);
}

TEST_CASE("generate_basic with zero noise is fully consistent") {
  const cc::Clustering planted = cc::near_equal_clusters(8, 2);
  auto [inst, truth] = cc::generate_basic(complete_graph(8), planted, 0.0,
                                          cc::NoiseSignPolicy::flip, 7);
  CHECK(truth.random_edges.empty());
  CHECK(inst.edge_count() == 28);
  for (const cc::EdgeRecord& e : inst.edges()) {
    CHECK(cc::edge_consistent(e, planted));
    const bool within = planted.label(e.u) == planted.label(e.v);
    CHECK(e.sign == (within ? cc::Sign::plus : cc::Sign::minus));
  }
  CHECK(oracle::clustering_cost(inst, planted.labels()) == 0.0);
}

TEST_CASE("generate_basic rejects bad parameters") {
  const cc::Clustering planted = cc::near_equal_clusters(4, 2);
  CHECK_THROWS_AS(cc::generate_basic(complete_graph(4), planted, 1.0,
                                     cc::NoiseSignPolicy::flip, 1),
                  cc::InputError);
  CHECK_THROWS_AS(cc::generate_basic(complete_graph(4), planted, 0.5,
                                     cc::NoiseSignPolicy::flip, 1),
                  cc::InputError);
  CHECK_THROWS_AS(cc::generate_basic(complete_graph(4), planted, -0.1,
                                     cc::NoiseSignPolicy::flip, 1),
                  cc::InputError);
  CHECK_THROWS_AS(cc::generate_basic(complete_graph(5), planted, 0.1,
                                     cc::NoiseSignPolicy::flip, 1),
                  cc::InputError);
}

TEST_CASE("flip policy makes Q equal E_R exactly") {
  for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
    auto [inst, truth] = cc::generate_gnp_planted(40, 0.5, 3, 0.3, seed);
    std::vector<bool> in_er(inst.edge_count(), false);
    for (std::int64_t i : truth.random_edges) in_er[static_cast<std::size_t>(i)] = true;
    for (std::size_t i = 0; i < inst.edge_count(); ++i) {
      CHECK(cc::edge_consistent(inst.edge(i), truth.planted) == !in_er[i]);
    }
    // With unit costs and every E_R edge flipped, the planted cost IS c(E_R).
    CHECK(oracle::clustering_cost(inst, truth.planted.labels()) ==
          static_cast<double>(truth.random_edges.size()));
  }
}

TEST_CASE("keep and random_sign policies stay within the model") {
  const cc::Clustering planted = cc::near_equal_clusters(30, 3);
  auto [kept, kt] = cc::generate_basic(complete_graph(30), planted, 0.3,
                                       cc::NoiseSignPolicy::keep, 11);
  for (const cc::EdgeRecord& e : kept.edges()) CHECK(cc::edge_consistent(e, planted));
  CHECK(!kt.random_edges.empty());

  auto [rnd, rt] = cc::generate_basic(complete_graph(30), planted, 0.3,
                                      cc::NoiseSignPolicy::random_sign, 11);
  std::vector<bool> in_er(rnd.edge_count(), false);
  for (std::int64_t i : rt.random_edges) in_er[static_cast<std::size_t>(i)] = true;
  std::size_t inconsistent = 0;
  for (std::size_t i = 0; i < rnd.edge_count(); ++i) {
    if (!cc::edge_consistent(rnd.edge(i), planted)) {
      CHECK(in_er[i]);  // inconsistency only inside E_R
      ++inconsistent;
    }
  }
  CHECK(inconsistent > 0);
  CHECK(inconsistent < rt.random_edges.size());  // a fair coin keeps some

  // Model guarantee: planted cost <= c(E_R) for any sign policy.
  CHECK(oracle::clustering_cost(rnd, planted.labels()) <=
        static_cast<double>(rt.random_edges.size()));
}

TEST_CASE("E_R membership count passes a binomial z-test over 1000 seeds") {
  const double epsilon = 0.2;
  long double total_edges = 0.0L;
  long double total_random = 0.0L;
  for (std::uint64_t seed = 1; seed <= 1000; ++seed) {
    auto [inst, truth] = cc::generate_gnp_planted(200, 0.25, 4, epsilon, seed);
    total_edges += static_cast<long double>(inst.edge_count());
    total_random += static_cast<long double>(truth.random_edges.size());
  }
  const long double mean = epsilon * total_edges;
  const long double sd = std::sqrt(epsilon * (1.0L - epsilon) * total_edges);
  const double z = static_cast<double>((total_random - mean) / sd);
  // Two-sided test at significance 0.001.
  CHECK(std::abs(z) < 3.29);
}

TEST_CASE("gnp edge count matches binomial moments") {
  const double p = 0.15;
  const int n = 1000;
  const double pairs = n * (n - 1) / 2.0;
  const double sd = std::sqrt(pairs * p * (1 - p));
  for (std::uint64_t seed : {1ULL, 9ULL, 42ULL}) {
    auto [inst, truth] = cc::generate_gnp_planted(n, p, 4, 0.2, seed);
    CHECK(std::abs(static_cast<double>(inst.edge_count()) - pairs * p) < 3 * sd);
    CHECK(truth.planted.cluster_sizes() == std::vector<std::int32_t>{250, 250, 250, 250});
    CHECK(truth.epsilon == 0.2);
  }
  CHECK_THROWS_AS(cc::generate_gnp_planted(10, 1.2, 2, 0.1, 1), cc::InputError);
}

TEST_CASE("generation is deterministic in the seed") {
  auto [a, at] = cc::generate_gnp_planted(60, 0.3, 3, 0.25, 99);
  auto [b, bt] = cc::generate_gnp_planted(60, 0.3, 3, 0.25, 99);
  auto [c, ct] = cc::generate_gnp_planted(60, 0.3, 3, 0.25, 100);
  CHECK(same_edges(a, b));
  CHECK(at.random_edges == bt.random_edges);
  CHECK_FALSE(same_edges(a, c));
}

// ---------------------------------------------------------------------------
// Adaptive model
// ---------------------------------------------------------------------------

namespace {

// Adds a fixed list of edges, optionally deleting every E_R edge at the end.
class FixedScript : public cc::AdversaryScript {
 public:
  FixedScript(int n, cc::Clustering planted, std::vector<cc::AdaptiveStep> steps,
              bool delete_all_random = false)
      : n_(n), planted_(std::move(planted)), steps_(std::move(steps)),
        delete_all_random_(delete_all_random) {}

  int vertex_count() const override { return n_; }
  cc::Clustering planted() const override { return planted_; }

  std::optional<cc::AdaptiveStep> next(std::span<const cc::AdaptiveRecord> history) override {
    if (history.size() >= steps_.size()) return std::nullopt;
    return steps_[history.size()];
  }

  std::vector<std::int64_t> removals(std::span<const cc::AdaptiveRecord> history) override {
    std::vector<std::int64_t> out;
    if (!delete_all_random_) return out;
    for (std::size_t t = 0; t < history.size(); ++t) {
      if (history[t].in_random_set) out.push_back(static_cast<std::int64_t>(t));
    }
    return out;
  }

 private:
  int n_;
  cc::Clustering planted_;
  std::vector<cc::AdaptiveStep> steps_;
  bool delete_all_random_;
};

// Proposes edges touching endpoints of earlier E_R edges (a concentration
// attack); falls back to a fresh pair when no random edge has appeared yet.
class ConcentrationScript : public cc::AdversaryScript {
 public:
  ConcentrationScript(int n, int budget) : n_(n), budget_(budget) {}

  int vertex_count() const override { return n_; }
  cc::Clustering planted() const override { return cc::near_equal_clusters(n_, 2); }

  std::optional<cc::AdaptiveStep> next(std::span<const cc::AdaptiveRecord> history) override {
    if (static_cast<int>(history.size()) >= budget_) return std::nullopt;
    int focus = 0;
    for (const cc::AdaptiveRecord& rec : history) {
      if (rec.in_random_set) focus = rec.step.u;
    }
    // March over pairs (focus, x) then lexicographic fallbacks.
    for (int x = 0; x < n_; ++x) {
      if (x == focus) continue;
      if (!used_.insert(key(std::min(focus, x), std::max(focus, x))).second) continue;
      return cc::AdaptiveStep{std::min(focus, x), std::max(focus, x), 1.0};
    }
    for (int u = 0; u < n_; ++u) {
      for (int v = u + 1; v < n_; ++v) {
        if (used_.insert(key(u, v)).second) return cc::AdaptiveStep{u, v, 1.0};
      }
    }
    return std::nullopt;
  }

 private:
  static std::uint64_t key(int u, int v) {
    return (static_cast<std::uint64_t>(u) << 32) | static_cast<std::uint32_t>(v);
  }
  int n_;
  int budget_;
  std::set<std::uint64_t> used_;
};

}  // namespace

TEST_CASE("adaptive with zero noise equals generate_basic on the same edges") {
  std::vector<cc::AdaptiveStep> steps{{0, 1, 1.0}, {1, 2, 0.5}, {2, 3, 1.0}};
  FixedScript script(4, cc::near_equal_clusters(4, 2), steps);
  auto [inst, truth] = cc::generate_adaptive(script, 0.0, 5);

  cc::CostedGraph path;
  path.n = 4;
  for (const cc::AdaptiveStep& s : steps) path.edges.push_back({s.u, s.v, s.cost});
  auto [basic, bt] = cc::generate_basic(path, cc::near_equal_clusters(4, 2), 0.0,
                                        cc::NoiseSignPolicy::flip, 5);
  CHECK(same_edges(inst, basic));
  CHECK(truth.random_edges.empty());
}

TEST_CASE("adaptive script deleting all E_R edges leaves a consistent instance") {
  std::vector<cc::AdaptiveStep> steps;
  for (int u = 0; u < 10; ++u) {
    for (int v = u + 1; v < 10; ++v) steps.push_back({u, v, 1.0});
  }
  FixedScript script(10, cc::near_equal_clusters(10, 2), steps, true);
  auto [inst, truth] = cc::generate_adaptive(script, 0.4, 17);
  CHECK(truth.random_edges.empty());
  CHECK(inst.edge_count() < steps.size());  // some edges really were deleted
  for (const cc::EdgeRecord& e : inst.edges()) CHECK(cc::edge_consistent(e, truth.planted));
  CHECK(oracle::clustering_cost(inst, truth.planted.labels()) == 0.0);
}

TEST_CASE("adaptive coins stay binomial under a concentration attack") {
  const double epsilon = 0.3;
  const int steps = 500;
  long double total = 0.0L;
  const int seeds = 200;
  for (std::uint64_t seed = 1; seed <= seeds; ++seed) {
    ConcentrationScript script(40, steps);
    auto [inst, truth] = cc::generate_adaptive(script, epsilon, seed);
    total += static_cast<long double>(truth.random_edges.size());
  }
  const long double trials = static_cast<long double>(seeds) * steps;
  const long double mean = epsilon * trials;
  const long double sd = std::sqrt(epsilon * (1.0L - epsilon) * trials);
  CHECK(std::abs(static_cast<double>((total - mean) / sd)) < 3.29);
}

TEST_CASE("adaptive protocol violations raise InputError") {
  std::vector<cc::AdaptiveStep> dup{{0, 1, 1.0}, {1, 0, 1.0}};
  FixedScript dup_script(3, cc::near_equal_clusters(3, 1), dup);
  CHECK_THROWS_AS(cc::generate_adaptive(dup_script, 0.0, 1), cc::InputError);

  std::vector<cc::AdaptiveStep> ok{{0, 1, 1.0}, {1, 2, 1.0}};
  FixedScript budget_script(3, cc::near_equal_clusters(3, 1), ok);
  CHECK_THROWS_AS(cc::generate_adaptive(budget_script, 0.0, 1, 1), cc::InputError);

  class BadRemoval : public FixedScript {
   public:
    using FixedScript::FixedScript;
    std::vector<std::int64_t> removals(std::span<const cc::AdaptiveRecord>) override {
      return {0};  // edge 0 is consistent at epsilon = 0, so this is illegal
    }
  };
  BadRemoval bad(3, cc::near_equal_clusters(3, 1), ok);
  CHECK_THROWS_AS(cc::generate_adaptive(bad, 0.0, 1), cc::InputError);
}

// ---------------------------------------------------------------------------
// File round trips
// ---------------------------------------------------------------------------

TEST_CASE("empty instance round-trips") {
  cc::Instance empty(3, {});
  const auto path = scratch_file("empty.cc");
  cc::save_instance(empty, path);
  cc::Instance back = cc::load_instance(path);
  CHECK(back.vertex_count() == 3);
  CHECK(back.edge_count() == 0);
}

TEST_CASE("instance and truth sidecar round-trip bit-exactly") {
  auto [inst, truth] = cc::generate_gnp_planted(50, 0.4, 3, 0.2, 12345);
  const auto path = scratch_file("roundtrip.cc");
  cc::save_instance(inst, path, &truth);

  cc::Instance back = cc::load_instance(path);
  CHECK(same_edges(inst, back));

  cc::GroundTruth tb = cc::load_ground_truth(cc::truth_path_for(path));
  CHECK(tb.planted == truth.planted);
  CHECK(tb.random_edges == truth.random_edges);
  CHECK(tb.epsilon == truth.epsilon);

  // Saving the loaded copy reproduces the files byte for byte.
  const auto path2 = scratch_file("roundtrip2.cc");
  cc::save_instance(back, path2, &tb);
  CHECK(slurp(path) == slurp(path2));
  CHECK(slurp(cc::truth_path_for(path)) == slurp(cc::truth_path_for(path2)));
}

TEST_CASE("labels file round-trips") {
  cc::Clustering c({0, 1, 2, 1, 0});
  const auto path = scratch_file("labels.cc-labels");
  cc::save_labels(c, path);
  CHECK(cc::load_labels(path) == c);
}

TEST_CASE("malformed files fail with the offending line") {
  const auto path = scratch_file("bad.cc");
  {
    std::ofstream out(path);
    out << "cc-instance v1 4 2\n0 1 1 +\n0 1 1 -\n";  // duplicate edge on line 3
  }
  try {
    cc::load_instance(path);
    FAIL("expected InputError");
  } catch (const cc::InputError& e) {
    CHECK(std::string(e.what()).find(":3:") != std::string::npos);
    CHECK(std::string(e.what()).find("duplicate") != std::string::npos);
  }

  const auto garbled = scratch_file("garbled.cc");
  {
    std::ofstream out(garbled);
    out << "cc-instance v1 4 1\n0 x 1 +\n";
  }
  CHECK_THROWS_AS(cc::load_instance(garbled), cc::InputError);

  const auto header = scratch_file("header.cc");
  {
    std::ofstream out(header);
    out << "not-a-header\n";
  }
  CHECK_THROWS_AS(cc::load_instance(header), cc::InputError);

  CHECK_THROWS_AS(cc::load_instance(scratch_file("missing.cc")), cc::InputError);
}
