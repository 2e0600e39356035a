#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "corrclust/instance.hpp"
#include "corrclust/sdp.hpp"

namespace cc {

struct PtasConfig {
  double delta = 0.1;
  /// When set, delta is recomputed per instance as (n ln n / c(E))^{1/6},
  /// clamped to [1e-6, 0.45], and the configured delta is ignored.
  bool paper_schedule = false;
  int local_search_max_passes = 50;
  SolverOptions solver;
};

struct PtasReport {
  double delta = 0.0;
  double sdp_objective = 0.0;
  double pruned_cost = 0.0;    ///< total cost of the edges removed before the residual solve
  double residual_cost = 0.0;  ///< disagreement cost of the final clustering on surviving edges
  double total_cost = 0.0;     ///< disagreement cost of the final clustering on ALL edges
  bool converged = true;
  /// (1-2eps)^{-4} delta^{-3} n ln^3 n with constant 1; context only, not a bound.
  double unnormalized_additive_bound = 0.0;
  bool has_truth = false;
  double planted_cost = 0.0;
  std::int64_t pruned_consistent_count = 0;
  std::int64_t pruned_inconsistent_count = 0;
};

struct PtasResult {
  Clustering clustering;
  PtasReport report;
  SdpSolution solution;
};

/// The delta/gamma schedule (n ln n / c(E))^{1/6} clamped to [1e-6, 0.45].
double paper_delta(const Instance& instance);

/// Removes every edge with edge_value > 1 - delta.  Returns the residual
/// instance on the same vertex set and the removed indices into
/// instance.edges().  Enforces c(removed) <= sdp_objective / (1 - delta).
std::pair<Instance, std::vector<int>> prune_edges(const Instance& instance,
                                                  const SdpSolution& solution, double delta);

/// Single-vertex-move local search: sweeps vertices in id order, moving each
/// to the cost-minimizing cluster (existing ids first, new singleton last)
/// until a full pass makes no strict improvement or max_passes is reached.
Clustering local_search_solve(const Instance& instance, const Clustering& init, int max_passes,
                              std::uint64_t seed = 0);

/// Same, starting from all-singletons.
Clustering local_search_solve(const Instance& instance, int max_passes, std::uint64_t seed = 0);

/// Full pipeline: SDP solve, prune, local search on the residual, then
/// re-evaluate the returned clustering on the full instance.
PtasResult run_ptas(const Instance& instance, const PtasConfig& config,
                    const GroundTruth* truth = nullptr);

}  // namespace cc
