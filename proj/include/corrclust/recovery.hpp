#pragma once

#include <utility>
#include <vector>

#include "corrclust/instance.hpp"
#include "corrclust/sdp.hpp"

namespace cc {

struct RecoveryParams {
  double rho_core = 0.1;
  bool cleanup_enabled = true;
  /// Clusters below this size are cleanup-merge candidates; 0 means
  /// max(2, ceil(0.02 * n)).
  int cleanup_min_size = 0;
  double cleanup_merge_threshold = 0.5;  ///< minimum average inner product to merge
};

/// Undirected ball graph over the embedding rows: (u,v) adjacent iff
/// ||u - v|| <= rho_core.  Neighbor lists are sorted.
struct AuxGraph {
  int n = 0;
  std::vector<std::vector<int>> adj;
};

AuxGraph build_aux_graph(const SdpSolution& solution, double rho_core);

/// Repeatedly extracts the unassigned vertex of maximum degree among
/// unassigned vertices (ties to the lowest id) together with its unassigned
/// neighbors, until every vertex is assigned.
Clustering greedy_cluster(const AuxGraph& aux);

/// Merges each cluster smaller than cleanup_min_size into the strictly larger
/// cluster with the highest average pairwise inner product, when that average
/// reaches cleanup_merge_threshold.  Small clusters are processed in
/// increasing size order (ties to the lowest cluster id).
Clustering cleanup_merge(const Clustering& clustering, const SdpSolution& solution,
                         const RecoveryParams& params);

std::pair<Clustering, SdpSolution> recover(const Instance& instance, const SolverOptions& opts,
                                           const RecoveryParams& params = {});

}  // namespace cc
