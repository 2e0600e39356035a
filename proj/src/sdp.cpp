#include "corrclust/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "corrclust/error.hpp"
#include "corrclust/rng.hpp"

namespace cc {

namespace {

double objective_of(const Instance& instance, const EmbeddingMatrix& x) {
  double total = 0.0;
  for (const EdgeRecord& e : instance.edges()) {
    const double ip = x.row(e.u).dot(x.row(e.v));
    total += e.cost * (e.sign == Sign::plus ? 1.0 - ip : ip);
  }
  return total;
}

// Clamp to the nonnegative orthant, then renormalize each row to the unit
// sphere.  Rows that collapse to zero are reseeded with a random nonnegative
// unit vector so iterates stay feasible.
void project_rows(EmbeddingMatrix& x, CounterRng& reset_rng) {
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    auto row = x.row(i);
    row = row.cwiseMax(0.0);
    double norm = row.norm();
    if (norm < 1e-12) {
      for (Eigen::Index j = 0; j < x.cols(); ++j) row(j) = std::abs(reset_rng.normal());
      norm = row.norm();
      if (norm < 1e-12) {
        row.setZero();
        row(0) = 1.0;
        continue;
      }
    }
    row /= norm;
  }
}

double tangent_gradient_norm(const EmbeddingMatrix& x, const EmbeddingMatrix& g) {
  double sq = 0.0;
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    const double radial = g.row(i).dot(x.row(i));
    sq += (g.row(i) - radial * x.row(i)).squaredNorm();
  }
  return std::sqrt(sq);
}

struct DescentResult {
  EmbeddingMatrix x;
  double objective = 0.0;
  int iterations = 0;
  bool converged = false;
};

DescentResult descend(const Instance& instance, EmbeddingMatrix x,
                      const SolverOptions& opts, double best_other,
                      CounterRng& reset_rng) {
  double f = objective_of(instance, x);
  EmbeddingMatrix g = objective_gradient(instance, x);
  EmbeddingMatrix x_new(x.rows(), x.cols());
  double alpha = opts.initial_step;
  int calm_iters = 0;
  int stall_iters = 0;
  DescentResult result;
  result.iterations = 0;

  for (int iter = 1; iter <= opts.max_iters; ++iter) {
    result.iterations = iter;
    x_new = x - alpha * g;
    project_rows(x_new, reset_rng);
    double f_new = objective_of(instance, x_new);
    int halvings = 0;
    while (f_new > f && halvings < 45) {
      alpha *= 0.5;
      x_new = x - alpha * g;
      project_rows(x_new, reset_rng);
      f_new = objective_of(instance, x_new);
      ++halvings;
    }
    if (f_new > f) {
      // No descent along -g at any step size: stationary for our purposes.
      result.converged = true;
      break;
    }

    EmbeddingMatrix g_new = objective_gradient(instance, x_new);

    // Barzilai-Borwein step from the projected displacement.
    const EmbeddingMatrix dx = x_new - x;
    const double ss = dx.squaredNorm();
    const double sy = (dx.array() * (g_new - g).array()).sum();
    alpha = sy > 1e-18 ? ss / sy : alpha * 2.0;
    alpha = std::clamp(alpha, opts.min_step, opts.max_step);

    const double drop = f - f_new;
    const double rel = drop / std::max(std::abs(f_new), 1e-12);
    x.swap(x_new);
    g.swap(g_new);
    f = f_new;

    if (f <= opts.objective_floor) {
      result.converged = true;
      break;
    }
    calm_iters = rel < opts.convergence_tol ? calm_iters + 1 : 0;
    if (calm_iters >= opts.convergence_window) {
      result.converged = true;
      break;
    }
    // Abandon restarts pinned well above an earlier restart's optimum.
    if (best_other >= 0.0 && f > best_other * (1.0 + opts.stall_ratio) + 1e-12) {
      if (++stall_iters >= opts.stall_window) break;
    } else {
      stall_iters = 0;
    }
  }
  result.x = std::move(x);
  result.objective = f;
  return result;
}

}  // namespace

EmbeddingMatrix objective_gradient(const Instance& instance, const EmbeddingMatrix& x) {
  EmbeddingMatrix g = EmbeddingMatrix::Zero(x.rows(), x.cols());
  for (const EdgeRecord& e : instance.edges()) {
    const double s = e.sign == Sign::plus ? -e.cost : e.cost;
    g.row(e.u) += s * x.row(e.v);
    g.row(e.v) += s * x.row(e.u);
  }
  return g;
}

SdpSolution solve(const Instance& instance, const SolverOptions& opts) {
  if (opts.restarts < 1) throw InputError("restarts must be >= 1");
  const int n = instance.vertex_count();
  int rank = opts.rank;
  if (rank == 0) rank = std::min({n, 2 * opts.k_guess + 8, 40});
  rank = std::max(rank, 1);

  SdpSolution solution;
  solution.rank = rank;
  if (n == 0) {
    solution.embedding = EmbeddingMatrix(0, rank);
    solution.trace.converged = true;
    return solution;
  }

  DescentResult best;
  best.objective = -1.0;
  int best_restart = 0;
  int best_iterations = 0;
  bool best_converged = false;

  for (int restart = 0; restart < opts.restarts; ++restart) {
    CounterRng init_rng(opts.seed, 1000 + static_cast<std::uint64_t>(restart));
    CounterRng reset_rng(opts.seed, 5000 + static_cast<std::uint64_t>(restart));
    EmbeddingMatrix x(n, rank);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < rank; ++j) x(i, j) = std::abs(init_rng.normal());
    }
    project_rows(x, reset_rng);

    if (instance.edge_count() == 0) {
      best = {std::move(x), 0.0, 0, true};
      best_restart = restart;
      best_iterations = 0;
      best_converged = true;
      break;
    }

    DescentResult run = descend(instance, std::move(x), opts,
                                restart == 0 ? -1.0 : best.objective, reset_rng);
    if (restart == 0 || run.objective < best.objective) {
      best = std::move(run);
      best_restart = restart;
      best_iterations = best.iterations;
      best_converged = best.converged;
    }
  }

  solution.embedding = std::move(best.x);
  solution.objective = sdp_cost(instance, solution);
  solution.trace.iterations = best_iterations;
  solution.trace.restarts_used = opts.restarts;
  solution.trace.best_restart = best_restart;
  solution.trace.converged = best_converged;
  solution.trace.final_gradient_norm =
      instance.edge_count() == 0
          ? 0.0
          : tangent_gradient_norm(solution.embedding,
                                  objective_gradient(instance, solution.embedding));
  return solution;
}

double edge_value(const SdpSolution& solution, const EdgeRecord& edge) {
  const int n = solution.vertex_count();
  if (edge.u < 0 || edge.v < 0 || edge.u >= n || edge.v >= n) {
    throw InputError("edge endpoints outside the solution's vertex range");
  }
  const double ip = solution.inner_product(edge.u, edge.v);
  if (ip < -10.0 * kNormTolerance || ip > 1.0 + 10.0 * kNormTolerance) {
    throw InvariantError("inner product " + std::to_string(ip) +
                         " outside [0,1] beyond tolerance");
  }
  const double f = edge.sign == Sign::plus ? 1.0 - ip : ip;
  return std::clamp(f, 0.0, 1.0);
}

double sdp_cost(const Instance& instance, const SdpSolution& solution) {
  double total = 0.0;
  for (const EdgeRecord& e : instance.edges()) total += e.cost * edge_value(solution, e);
  return total;
}

SdpSolution embed_clustering(const Clustering& clustering, int rank) {
  if (rank < clustering.cluster_count()) {
    throw InputError("rank " + std::to_string(rank) + " is smaller than the cluster count " +
                     std::to_string(clustering.cluster_count()));
  }
  SdpSolution solution;
  solution.rank = rank;
  solution.embedding = EmbeddingMatrix::Zero(clustering.size(), rank);
  for (int u = 0; u < clustering.size(); ++u) solution.embedding(u, clustering.label(u)) = 1.0;
  solution.trace.converged = true;
  return solution;
}

SdpSolution embed_clustering(const Instance& instance, const Clustering& clustering, int rank) {
  SdpSolution solution = embed_clustering(clustering, rank);
  solution.objective = sdp_cost(instance, solution);
  return solution;
}

void save_solution(const SdpSolution& solution, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot open " + path.string() + " for writing");
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", solution.objective);
  out << "cc-sdp v1 " << solution.vertex_count() << ' ' << solution.rank << ' ' << buf << '\n';
  for (int i = 0; i < solution.vertex_count(); ++i) {
    for (int j = 0; j < solution.rank; ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g", solution.embedding(i, j));
      out << (j > 0 ? " " : "") << buf;
    }
    out << '\n';
  }
  if (!out) throw InputError("failed writing " + path.string());
}

SdpSolution load_solution(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  std::string magic, version;
  int n = 0, rank = 0;
  double objective = 0.0;
  if (!(in >> magic >> version >> n >> rank >> objective) || magic != "cc-sdp" ||
      version != "v1" || n < 0 || rank < 1) {
    throw InputError(path.string() + ": expected header 'cc-sdp v1 <n> <r> <objective>'");
  }
  SdpSolution solution;
  solution.rank = rank;
  solution.objective = objective;
  solution.embedding = EmbeddingMatrix(n, rank);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < rank; ++j) {
      if (!(in >> solution.embedding(i, j))) {
        throw InputError(path.string() + ": truncated embedding row " + std::to_string(i));
      }
    }
  }
  return solution;
}

}  // namespace cc
