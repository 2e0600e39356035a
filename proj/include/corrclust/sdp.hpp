#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <filesystem>

#include "corrclust/instance.hpp"

namespace cc {

using EmbeddingMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Row norms of a feasible embedding may deviate from 1 by at most this much.
inline constexpr double kNormTolerance = 1e-6;

struct SolverOptions {
  int rank = 0;     ///< 0 = auto: min(n, 2 * k_guess + 8, 40)
  int k_guess = 4;  ///< expected cluster count used by the auto rank rule
  int max_iters = 4000;
  int restarts = 5;
  double convergence_tol = 1e-7;  ///< relative objective change per iteration
  int convergence_window = 50;    ///< tol must hold this many iterations in a row
  double objective_floor = 1e-12; ///< objectives at or below this count as solved
  double initial_step = 1.0;
  double min_step = 1e-12;
  double max_step = 1e6;
  double stall_ratio = 0.05;  ///< abandon a restart this far above the best...
  int stall_window = 200;     ///< ...for this many consecutive iterations
  std::uint64_t seed = 1;
};

struct SolverTrace {
  int iterations = 0;             ///< iterations spent in the best restart
  double final_gradient_norm = 0; ///< tangent gradient norm at the returned point
  int restarts_used = 0;
  int best_restart = 0;
  bool converged = false;
};

// One unit vector with nonnegative coordinates per vertex (row u is the
// vector for vertex u), plus the relaxation objective it attains.
struct SdpSolution {
  EmbeddingMatrix embedding;
  int rank = 0;
  double objective = 0.0;
  SolverTrace trace;

  int vertex_count() const { return static_cast<int>(embedding.rows()); }
  double inner_product(int u, int v) const { return embedding.row(u).dot(embedding.row(v)); }
};

// Minimizes  sum_{+edges} c (1 - <u,v>) + sum_{-edges} c <u,v>  over unit rows
// with nonnegative entries, by projected gradient descent with a
// Barzilai-Borwein step and halving line search, best of `restarts` seeded
// starts.  The feasible set is an inner approximation of the relaxation that
// still contains every integral clustering, so the returned objective is an
// upper bound on the relaxation optimum and is driven at or below integral
// OPT whenever the solver converges globally.
SdpSolution solve(const Instance& instance, const SolverOptions& opts = {});

/// Per-edge value f(u,v): 1 - <u,v> on plus edges, <u,v> on minus edges,
/// clamped to [0,1]; throws InvariantError if the inner product strays more
/// than 10x the norm tolerance outside [0,1].
double edge_value(const SdpSolution& solution, const EdgeRecord& edge);

/// Total relaxation cost sum_e c(e) f(e) of `solution` on `instance`.
double sdp_cost(const Instance& instance, const SdpSolution& solution);

/// Indicator embedding: vertex u maps to basis vector e_{label(u)}.
/// The objective field is left 0; evaluate with sdp_cost against an instance.
SdpSolution embed_clustering(const Clustering& clustering, int rank);

/// Indicator embedding with the objective filled in from `instance` (equals
/// the integral clustering cost exactly).
SdpSolution embed_clustering(const Instance& instance, const Clustering& clustering, int rank);

/// Objective gradient with respect to the embedding (before any projection).
EmbeddingMatrix objective_gradient(const Instance& instance, const EmbeddingMatrix& embedding);

void save_solution(const SdpSolution& solution, const std::filesystem::path& path);
SdpSolution load_solution(const std::filesystem::path& path);

}  // namespace cc
