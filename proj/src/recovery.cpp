#include "corrclust/recovery.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "corrclust/error.hpp"

namespace cc {

AuxGraph build_aux_graph(const SdpSolution& solution, double rho_core) {
  if (!(rho_core > 0.0 && rho_core < 1.0)) throw InputError("rho_core must lie in (0, 1)");
  const int n = solution.vertex_count();
  AuxGraph aux;
  aux.n = n;
  aux.adj.resize(n);
  // ||u - v||^2 = 2 - 2<u,v> for unit rows, so compare inner products against
  // a single cutoff instead of forming differences.
  const double min_ip = 1.0 - 0.5 * rho_core * rho_core;
  const EmbeddingMatrix& x = solution.embedding;
  constexpr int kBlock = 256;
  for (int lo = 0; lo < n; lo += kBlock) {
    const int rows = std::min(kBlock, n - lo);
    const Eigen::MatrixXd block = x.middleRows(lo, rows) * x.transpose();
    for (int i = 0; i < rows; ++i) {
      const int u = lo + i;
      for (int v = u + 1; v < n; ++v) {
        if (block(i, v) >= min_ip) {
          aux.adj[u].push_back(v);
          aux.adj[v].push_back(u);
        }
      }
    }
  }
  return aux;
}

Clustering greedy_cluster(const AuxGraph& aux) {
  const int n = aux.n;
  std::vector<int> labels(n, -1);
  std::vector<int> degree(n, 0);
  for (int u = 0; u < n; ++u) degree[u] = static_cast<int>(aux.adj[u].size());

  int assigned = 0;
  int next_label = 0;
  while (assigned < n) {
    int pick = -1;
    for (int u = 0; u < n; ++u) {
      if (labels[u] < 0 && (pick < 0 || degree[u] > degree[pick])) pick = u;
    }
    std::vector<int> members{pick};
    for (const int v : aux.adj[pick]) {
      if (labels[v] < 0) members.push_back(v);
    }
    for (const int v : members) labels[v] = next_label;
    for (const int v : members) {
      for (const int w : aux.adj[v]) {
        if (labels[w] < 0) --degree[w];
      }
    }
    assigned += static_cast<int>(members.size());
    ++next_label;
  }
  return Clustering(std::move(labels));
}

Clustering cleanup_merge(const Clustering& clustering, const SdpSolution& solution,
                         const RecoveryParams& params) {
  const int n = clustering.size();
  if (solution.vertex_count() != n) {
    throw InputError("solution vertex count does not match the clustering");
  }
  if (!(params.cleanup_merge_threshold > 0.0 && params.cleanup_merge_threshold < 1.0)) {
    throw InputError("cleanup_merge_threshold must lie in (0, 1)");
  }
  const int min_size = params.cleanup_min_size > 0
                           ? params.cleanup_min_size
                           : std::max(2, static_cast<int>(std::ceil(0.02 * n)));
  const int k = clustering.cluster_count();

  // Sum of member vectors per cluster: the average pairwise inner product
  // between clusters A and B is <sum_A, sum_B> / (|A| |B|).
  const int r = solution.rank;
  Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(k, r);
  std::vector<int> size(k, 0);
  for (int u = 0; u < n; ++u) {
    const int c = clustering.label(u);
    sums.row(c) += solution.embedding.row(u);
    ++size[c];
  }

  std::vector<int> order(k);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return size[a] < size[b]; });

  std::vector<int> target(k);
  std::iota(target.begin(), target.end(), 0);
  std::vector<bool> alive(k, true);
  for (const int c : order) {
    if (!alive[c] || size[c] >= min_size) continue;
    int best = -1;
    double best_avg = 0.0;
    for (int d = 0; d < k; ++d) {
      if (d == c || !alive[d] || size[d] <= size[c]) continue;
      const double avg = sums.row(c).dot(sums.row(d)) /
                         (static_cast<double>(size[c]) * static_cast<double>(size[d]));
      if (best < 0 || avg > best_avg + 1e-12) {
        best = d;
        best_avg = avg;
      }
    }
    if (best >= 0 && best_avg >= params.cleanup_merge_threshold) {
      sums.row(best) += sums.row(c);
      size[best] += size[c];
      size[c] = 0;
      alive[c] = false;
      target[c] = best;
    }
  }

  // Merges can chain when a target was itself merged later; follow the links.
  std::vector<int> labels(n);
  for (int u = 0; u < n; ++u) {
    int c = clustering.label(u);
    while (target[c] != c) c = target[c];
    labels[u] = c;
  }
  return Clustering::densify(labels);
}

std::pair<Clustering, SdpSolution> recover(const Instance& instance, const SolverOptions& opts,
                                           const RecoveryParams& params) {
  SdpSolution solution = solve(instance, opts);
  const AuxGraph aux = build_aux_graph(solution, params.rho_core);
  Clustering clustering = greedy_cluster(aux);
  if (params.cleanup_enabled) clustering = cleanup_merge(clustering, solution, params);
  return {std::move(clustering), std::move(solution)};
}

}  // namespace cc
