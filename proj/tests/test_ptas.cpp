#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "corrclust/error.hpp"
#include "corrclust/instance.hpp"
#include "corrclust/metrics.hpp"
#include "corrclust/ptas.hpp"
#include "corrclust/sdp.hpp"
#include "oracles.hpp"

namespace {

// Three disjoint plus edges whose endpoints sit at chosen inner products, so
// the edge values f are exactly {0.95, 0.5, 0.02}.
std::pair<cc::Instance, cc::SdpSolution> three_edge_fixture() {
  cc::Instance inst(6, {{0, 1, 1.0, cc::Sign::plus},
                        {2, 3, 1.0, cc::Sign::plus},
                        {4, 5, 1.0, cc::Sign::plus}});
  cc::SdpSolution sol;
  sol.rank = 2;
  sol.embedding = cc::EmbeddingMatrix::Zero(6, 2);
  const double ips[] = {0.05, 0.5, 0.98};
  for (int pair = 0; pair < 3; ++pair) {
    sol.embedding(2 * pair, 0) = 1.0;
    sol.embedding(2 * pair + 1, 0) = ips[pair];
    sol.embedding(2 * pair + 1, 1) = std::sqrt(1.0 - ips[pair] * ips[pair]);
  }
  sol.objective = cc::sdp_cost(inst, sol);
  return {std::move(inst), std::move(sol)};
}

}  // namespace

TEST_CASE("prune_edges removes exactly the edges above the threshold") {
  auto [inst, sol] = three_edge_fixture();
  auto [residual, removed] = cc::prune_edges(inst, sol, 0.1);
  CHECK(removed == std::vector<int>{0});  // only f = 0.95 > 0.9
  CHECK(residual.vertex_count() == 6);
  REQUIRE(residual.edge_count() == 2);
  CHECK(residual.edge(0).u == 2);
  CHECK(residual.edge(1).u == 4);

  // With a tighter threshold no edge crosses 1 - delta.
  auto [all_kept, removed2] = cc::prune_edges(inst, sol, 0.04);
  CHECK(removed2.empty());
  CHECK(all_kept.edge_count() == 3);

  CHECK_THROWS_AS(cc::prune_edges(inst, sol, 0.0), cc::InputError);
  CHECK_THROWS_AS(cc::prune_edges(inst, sol, 0.5), cc::InputError);
}

TEST_CASE("prune accounting holds on solver output") {
  for (std::uint64_t seed : {1ULL, 2ULL, 3ULL, 4ULL}) {
    auto [inst, truth] = cc::generate_gnp_planted(30, 0.6, 3, 0.3, seed);
    const cc::SdpSolution sol = cc::solve(inst);
    for (double delta : {0.05, 0.1, 0.25, 0.45}) {
      auto [residual, removed] = cc::prune_edges(inst, sol, delta);
      double removed_cost = 0.0;
      for (int i : removed) removed_cost += inst.edge(i).cost;
      CHECK(removed_cost <= sol.objective / (1.0 - delta) + 1e-9);
      CHECK(residual.edge_count() + removed.size() == inst.edge_count());
    }
  }
}

TEST_CASE("paper delta schedule follows the clamped closed form") {
  auto [inst, truth] = cc::generate_gnp_planted(100, 0.4, 2, 0.1, 6);
  const double raw =
      std::pow(100.0 * std::log(100.0) / inst.total_cost(), 1.0 / 6.0);
  CHECK(raw > 0.45);  // small graphs cannot carry enough cost mass
  CHECK(cc::paper_delta(inst) == 0.45);

  // A complete unit-cost graph needs roughly n >= 2000 before the formula
  // drops below the cap.
  const int n = 2048;
  std::vector<cc::EdgeRecord> edges;
  edges.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) edges.push_back({u, v, 1.0, cc::Sign::plus});
  }
  const cc::Instance big(n, std::move(edges));
  const double expected =
      std::pow(n * std::log(static_cast<double>(n)) / big.total_cost(), 1.0 / 6.0);
  CHECK(expected < 0.45);
  CHECK(cc::paper_delta(big) == doctest::Approx(expected).epsilon(1e-12));

  cc::Instance tiny(3, {{0, 1, 1.0, cc::Sign::plus}});
  CHECK(cc::paper_delta(tiny) == 0.45);
  cc::Instance empty(2, {});
  CHECK(cc::paper_delta(empty) == 0.45);
  cc::Instance lone(1, {});
  CHECK(cc::paper_delta(lone) == 0.45);
}

TEST_CASE("local search solves all-plus and all-minus graphs to cost zero") {
  // Complete all-plus graph: one cluster.
  std::vector<cc::EdgeRecord> plus_edges;
  for (int u = 0; u < 6; ++u) {
    for (int v = u + 1; v < 6; ++v) plus_edges.push_back({u, v, 1.0, cc::Sign::plus});
  }
  cc::Instance all_plus(6, plus_edges);
  cc::Clustering one = cc::local_search_solve(all_plus, 50);
  CHECK(one.cluster_count() == 1);
  CHECK(oracle::clustering_cost(all_plus, one.labels()) == 0.0);

  // A plus path is also absorbed into one cluster by the id-order sweep.
  cc::Instance path(5, {{0, 1, 1.0, cc::Sign::plus},
                        {1, 2, 1.0, cc::Sign::plus},
                        {2, 3, 1.0, cc::Sign::plus},
                        {3, 4, 1.0, cc::Sign::plus}});
  cc::Clustering path_result = cc::local_search_solve(path, 50);
  CHECK(oracle::clustering_cost(path, path_result.labels()) == 0.0);

  // Complete all-minus graph: singletons.
  std::vector<cc::EdgeRecord> minus_edges;
  for (int u = 0; u < 6; ++u) {
    for (int v = u + 1; v < 6; ++v) minus_edges.push_back({u, v, 1.0, cc::Sign::minus});
  }
  cc::Instance all_minus(6, minus_edges);
  cc::Clustering singles = cc::local_search_solve(all_minus, 50);
  CHECK(singles.cluster_count() == 6);
  CHECK(oracle::clustering_cost(all_minus, singles.labels()) == 0.0);
}

TEST_CASE("local search reaches a single-move local optimum") {
  std::mt19937 rng(99);
  for (int trial = 0; trial < 25; ++trial) {
    const int n = 4 + static_cast<int>(rng() % 5);  // 4..8
    const cc::Instance inst = oracle::random_instance(rng, n);
    const cc::Clustering result = cc::local_search_solve(inst, 50);
    const double cost = oracle::clustering_cost(inst, result.labels());

    // No relabeling of a single vertex to any existing cluster or a fresh
    // singleton may strictly improve the cost.
    const int k = result.cluster_count();
    for (int u = 0; u < n; ++u) {
      for (int target = 0; target <= k; ++target) {
        std::vector<std::int32_t> moved = result.labels();
        moved[u] = target;
        CHECK(oracle::clustering_cost(inst, moved) >= cost - 1e-9);
      }
    }

    // And the cost cannot beat the exhaustive optimum.
    CHECK(cost >= oracle::brute_force_opt(inst) - 1e-12);
  }
}

TEST_CASE("local search cost is monotone in the pass budget") {
  std::mt19937 rng(123);
  const cc::Instance inst = oracle::random_instance(rng, 8);
  const cc::Clustering init = cc::near_equal_clusters(8, 2);
  double prev = oracle::clustering_cost(inst, init.labels());
  for (int passes = 1; passes <= 6; ++passes) {
    const cc::Clustering c = cc::local_search_solve(inst, init, passes);
    const double cost = oracle::clustering_cost(inst, c.labels());
    CHECK(cost <= prev + 1e-12);
    prev = cost;
  }
}

TEST_CASE("run_ptas on a zero-noise instance recovers the planted clustering") {
  auto [inst, truth] = cc::generate_gnp_planted(16, 1.0, 2, 0.0, 21);
  cc::PtasConfig config;
  const cc::PtasResult result = cc::run_ptas(inst, config, &truth);
  CHECK(result.report.total_cost == 0.0);
  CHECK(result.report.residual_cost == 0.0);
  CHECK(result.clustering.cluster_count() == 2);
  const cc::MatchResult match = cc::classification_error(truth.planted, result.clustering);
  CHECK(match.error == 0.0);
  CHECK(result.report.has_truth);
  CHECK(result.report.planted_cost == 0.0);
}

TEST_CASE("run_ptas reports are internally consistent") {
  for (std::uint64_t seed : {3ULL, 4ULL}) {
    auto [inst, truth] = cc::generate_gnp_planted(40, 0.5, 3, 0.25, seed);
    cc::PtasConfig config;
    config.paper_schedule = true;
    const cc::PtasResult result = cc::run_ptas(inst, config, &truth);
    const cc::PtasReport& rep = result.report;

    CHECK(rep.delta == doctest::Approx(cc::paper_delta(inst)).epsilon(1e-15));
    CHECK(rep.total_cost ==
          doctest::Approx(oracle::clustering_cost(inst, result.clustering.labels()))
              .epsilon(1e-9));

    // Replaying the prune from the reported solution reproduces the split.
    auto [residual, removed] = cc::prune_edges(inst, result.solution, rep.delta);
    double pruned_cost = 0.0;
    for (int i : removed) pruned_cost += inst.edge(i).cost;
    CHECK(rep.pruned_cost == doctest::Approx(pruned_cost).epsilon(1e-12));
    CHECK(rep.residual_cost ==
          doctest::Approx(oracle::clustering_cost(residual, result.clustering.labels()))
              .epsilon(1e-9));
    CHECK(rep.pruned_consistent_count + rep.pruned_inconsistent_count ==
          static_cast<std::int64_t>(removed.size()));
    CHECK(rep.planted_cost ==
          doctest::Approx(oracle::clustering_cost(inst, truth.planted.labels()))
              .epsilon(1e-12));
    CHECK(rep.unnormalized_additive_bound > 0.0);
    CHECK(rep.sdp_objective == result.solution.objective);
  }
}

TEST_CASE("run_ptas total cost dominates the exhaustive optimum on small instances") {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 5 + static_cast<int>(rng() % 4);
    const cc::Instance inst = oracle::random_instance(rng, n);
    if (inst.edge_count() == 0) continue;
    cc::PtasConfig config;
    const cc::PtasResult result = cc::run_ptas(inst, config, nullptr);
    CHECK(result.report.total_cost >= oracle::brute_force_opt(inst) - 1e-9);
    CHECK_FALSE(result.report.has_truth);
  }
}

TEST_CASE("run_ptas beats the planted cost on average at bench scale") {
  double total = 0.0;
  double planted = 0.0;
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    auto [inst, truth] = cc::generate_gnp_planted(200, 0.25, 4, 0.2, seed);
    cc::PtasConfig config;
    config.paper_schedule = true;
    config.solver.rank = 4;
    const cc::PtasResult result = cc::run_ptas(inst, config, &truth);
    total += result.report.total_cost;
    planted += result.report.planted_cost;
  }
  CHECK(total / 4.0 <= planted / 4.0);
}
