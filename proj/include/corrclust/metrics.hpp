#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "corrclust/instance.hpp"
#include "corrclust/sdp.hpp"

namespace cc {

/// Disagreement cost: cut plus edges and uncut minus edges, weighted by cost.
double clustering_cost(const Instance& instance, const Clustering& clustering);

struct MatchResult {
  double error = 0.0;  ///< 1 - matched_overlap / n
  double matched_overlap = 0.0;
  std::vector<std::pair<int, int>> matching;  ///< (planted cluster, found cluster)
};

/// Maximum-weight partial matching between the two partitions' clusters with
/// weights |P_i intersect C_j|, solved exactly by an assignment algorithm.
MatchResult classification_error(const Clustering& planted, const Clustering& found);

struct AssumptionsReport {
  std::vector<double> lambda_gap_per_cluster;
  double lambda_gap = 0.0;  ///< minimum over clusters
  double beta = 0.0;        ///< within-cluster cost fraction of c(E)
  std::vector<std::vector<double>> beta_matrix;  ///< cross-cluster fractions, zero diagonal
  double intercluster_density_threshold = 0.0;   ///< unnormalized, constant 1
  double cluster_regularity_max_dev = 0.0;
  double intercluster_regularity_max_dev = 0.0;
  double predicted_eta = 0.0;  ///< unnormalized, constant 1
  double epsilon = 0.0;
};

AssumptionsReport check_assumptions(const Instance& instance, const GroundTruth& truth);

struct StructuralStats {
  double delta = 0.0;
  double gamma = 0.0;
  double sigma = 0.0;         ///< 6 delta / (1 - 2 epsilon)
  double lambda_bound = 0.0;  ///< unnormalized, constant 1
  double sdp_objective = 0.0;
  double q_cost = 0.0;            ///< c(Q), inconsistent random edges
  double q_surviving_cost = 0.0;  ///< cost of Q edges with f <= 1 - delta
  double e_flip_cost = 0.0;       ///< c(E_flip), edges with f > 1 - delta
  double q_minus_flip_cost = 0.0;
  double flip_minus_q_cost = 0.0;
  double sdp_hat_cost = 0.0;  ///< same vectors on the E_flip-sign-flipped instance
  std::int64_t q_count = 0;
  std::int64_t e_flip_count = 0;
};

StructuralStats structural_stats(const Instance& instance, const GroundTruth& truth,
                                 const SdpSolution& solution,
                                 std::optional<double> delta = std::nullopt);

struct ClusterCore {
  int cluster = 0;
  int center = 0;
  int size = 0;
  int core_size = 0;
  double core_fraction = 0.0;
};

struct CoreStructureReport {
  double rho_core = 0.1;
  double rho_inter = 0.8;
  std::vector<ClusterCore> clusters;
  std::vector<std::vector<double>> center_distances;
  double min_center_distance = 0.0;  ///< NaN when fewer than two clusters
  double min_core_fraction = 0.0;
};

CoreStructureReport core_structure(const SdpSolution& solution, const GroundTruth& truth,
                                   double rho_core = 0.1, double rho_inter = 0.8);

}  // namespace cc
