#include "corrclust/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "corrclust/error.hpp"
#include "corrclust/ptas.hpp"
#include "corrclust/spectral.hpp"

namespace cc {

double clustering_cost(const Instance& instance, const Clustering& clustering) {
  if (clustering.size() != instance.vertex_count()) {
    throw InputError("clustering size does not match the instance");
  }
  double total = 0.0;
  for (const EdgeRecord& e : instance.edges()) {
    const bool together = clustering.label(e.u) == clustering.label(e.v);
    if (e.sign == Sign::plus ? !together : together) total += e.cost;
  }
  return total;
}

namespace {

// Assignment on a square cost matrix by the shortest-augmenting-path method
// with potentials.  Returns row_of_col: column j -> assigned row (1-based
// internally, converted by the caller).
std::vector<int> solve_assignment(const std::vector<std::vector<double>>& cost) {
  const int n = static_cast<int>(cost.size());
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> match(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    match[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<bool> used(n + 1, false);
    do {
      used[j0] = true;
      const int i0 = match[j0];
      int j1 = -1;
      double delta = inf;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const int j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  return match;
}

}  // namespace

MatchResult classification_error(const Clustering& planted, const Clustering& found) {
  if (planted.size() != found.size()) {
    throw InputError("clusterings have different vertex counts");
  }
  const int n = planted.size();
  MatchResult result;
  if (n == 0) return result;

  const int kp = planted.cluster_count();
  const int kf = found.cluster_count();
  std::vector<std::vector<double>> overlap(kp, std::vector<double>(kf, 0.0));
  for (int u = 0; u < n; ++u) overlap[planted.label(u)][found.label(u)] += 1.0;

  const int s = std::max(kp, kf);
  std::vector<std::vector<double>> cost(s, std::vector<double>(s, 0.0));
  for (int i = 0; i < kp; ++i) {
    for (int j = 0; j < kf; ++j) cost[i][j] = -overlap[i][j];
  }
  const std::vector<int> match = solve_assignment(cost);

  for (int j = 1; j <= s; ++j) {
    const int row = match[j] - 1;
    const int col = j - 1;
    if (row < kp && col < kf && overlap[row][col] > 0.0) {
      result.matched_overlap += overlap[row][col];
      result.matching.push_back({row, col});
    }
  }
  std::sort(result.matching.begin(), result.matching.end());
  result.error = 1.0 - result.matched_overlap / n;
  return result;
}

AssumptionsReport check_assumptions(const Instance& instance, const GroundTruth& truth) {
  const int n = instance.vertex_count();
  const Clustering& planted = truth.planted;
  if (planted.size() != n) throw InputError("ground truth does not match the instance");
  const int k = planted.cluster_count();
  const std::vector<std::vector<int>> members = planted.clusters();

  AssumptionsReport rep;
  rep.epsilon = truth.epsilon;
  rep.beta_matrix.assign(k, std::vector<double>(k, 0.0));

  std::vector<int> index_in_cluster(n, 0);
  for (int c = 0; c < k; ++c) {
    for (int i = 0; i < static_cast<int>(members[c].size()); ++i) {
      index_in_cluster[members[c][i]] = i;
    }
  }

  const double total = instance.total_cost();
  double within = 0.0;
  std::vector<std::vector<WeightedEdge>> induced(k);
  // Per-vertex incident cost inside the own cluster and toward each other
  // cluster, for the regularity deviations.
  std::vector<double> inner_cost(n, 0.0);
  std::vector<std::vector<double>> cross_cost(k);
  for (int c = 0; c < k; ++c) cross_cost[c].assign(members[c].size() * k, 0.0);

  for (const EdgeRecord& e : instance.edges()) {
    const int cu = planted.label(e.u);
    const int cv = planted.label(e.v);
    if (cu == cv) {
      within += e.cost;
      induced[cu].push_back({index_in_cluster[e.u], index_in_cluster[e.v], e.cost});
      inner_cost[e.u] += e.cost;
      inner_cost[e.v] += e.cost;
    } else {
      rep.beta_matrix[cu][cv] += e.cost;
      rep.beta_matrix[cv][cu] += e.cost;
      cross_cost[cu][index_in_cluster[e.u] * static_cast<std::size_t>(k) + cv] += e.cost;
      cross_cost[cv][index_in_cluster[e.v] * static_cast<std::size_t>(k) + cu] += e.cost;
    }
  }

  rep.beta = total > 0.0 ? within / total : 0.0;
  if (total > 0.0) {
    for (auto& row : rep.beta_matrix) {
      for (double& x : row) x /= total;
    }
  }

  rep.lambda_gap_per_cluster.reserve(k);
  for (int c = 0; c < k; ++c) {
    rep.lambda_gap_per_cluster.push_back(
        normalized_laplacian_gap(static_cast<int>(members[c].size()), induced[c]));
  }
  rep.lambda_gap = k > 0 ? *std::min_element(rep.lambda_gap_per_cluster.begin(),
                                             rep.lambda_gap_per_cluster.end())
                         : 0.0;

  auto max_rel_dev = [](const double* vals, int count) {
    if (count == 0) return 0.0;
    double mean = 0.0;
    for (int i = 0; i < count; ++i) mean += vals[i];
    mean /= count;
    if (mean <= 0.0) return 0.0;
    double dev = 0.0;
    for (int i = 0; i < count; ++i) dev = std::max(dev, std::abs(vals[i] - mean) / mean);
    return dev;
  };

  for (int c = 0; c < k; ++c) {
    std::vector<double> vals(members[c].size());
    for (std::size_t i = 0; i < members[c].size(); ++i) vals[i] = inner_cost[members[c][i]];
    rep.cluster_regularity_max_dev = std::max(
        rep.cluster_regularity_max_dev, max_rel_dev(vals.data(), static_cast<int>(vals.size())));
    for (int d = 0; d < k; ++d) {
      if (d == c) continue;
      for (std::size_t i = 0; i < members[c].size(); ++i) {
        vals[i] = cross_cost[c][i * static_cast<std::size_t>(k) + d];
      }
      rep.intercluster_regularity_max_dev =
          std::max(rep.intercluster_regularity_max_dev,
                   max_rel_dev(vals.data(), static_cast<int>(vals.size())));
    }
  }

  const double eps_factor = 1.0 - 2.0 * truth.epsilon;
  if (n >= 2 && total > 0.0 && eps_factor > 0.0) {
    const double ratio = n * std::log(static_cast<double>(n)) / total;
    rep.intercluster_density_threshold = std::pow(ratio, 1.0 / 6.0) / (eps_factor * eps_factor);
    const double spectral = rep.beta * rep.lambda_gap;
    rep.predicted_eta = spectral > 0.0
                            ? std::pow(ratio, 1.0 / 12.0) / (eps_factor * std::sqrt(spectral))
                            : std::numeric_limits<double>::infinity();
  }
  return rep;
}

StructuralStats structural_stats(const Instance& instance, const GroundTruth& truth,
                                 const SdpSolution& solution, std::optional<double> delta_opt) {
  if (truth.planted.size() != instance.vertex_count() ||
      solution.vertex_count() != instance.vertex_count()) {
    throw InputError("instance, truth and solution vertex counts differ");
  }
  StructuralStats st;
  st.delta = delta_opt.value_or(paper_delta(instance));
  if (!(st.delta > 0.0 && st.delta < 0.5)) throw InputError("delta must lie in (0, 0.5)");
  st.gamma = st.delta;

  std::vector<bool> in_q(instance.edge_count(), false);
  for (const std::int64_t idx : truth.random_edges) {
    const EdgeRecord& e = instance.edges()[static_cast<std::size_t>(idx)];
    if (!edge_consistent(e, truth.planted)) in_q[static_cast<std::size_t>(idx)] = true;
  }

  const double threshold = 1.0 - st.delta;
  double sdp_objective = 0.0;
  for (int i = 0; i < instance.edge_count(); ++i) {
    const EdgeRecord& e = instance.edges()[i];
    const double f = edge_value(solution, e);
    sdp_objective += e.cost * f;
    const bool flip = f > threshold;
    if (flip) {
      st.e_flip_cost += e.cost;
      ++st.e_flip_count;
      st.sdp_hat_cost += e.cost * (1.0 - f);
    } else {
      st.sdp_hat_cost += e.cost * f;
    }
    if (in_q[i]) {
      st.q_cost += e.cost;
      ++st.q_count;
      if (!flip) st.q_surviving_cost += e.cost;
    } else if (flip) {
      st.flip_minus_q_cost += e.cost;
    }
  }
  st.q_minus_flip_cost = st.q_surviving_cost;
  st.sdp_objective = sdp_objective;

  const double bound = sdp_objective / (1.0 - st.delta);
  if (st.e_flip_cost > bound * (1.0 + 1e-12) + 1e-12) {
    throw InvariantError("c(E_flip) exceeds sdp_objective/(1-delta)");
  }
  if (st.sdp_hat_cost > sdp_objective * (1.0 + 1e-12) + 1e-12) {
    throw InvariantError("flipped-instance cost exceeds the original objective");
  }

  const double eps_factor = 1.0 - 2.0 * truth.epsilon;
  st.sigma = eps_factor > 0.0 ? 6.0 * st.delta / eps_factor : 0.0;
  const double n = instance.vertex_count();
  if (n >= 2 && eps_factor > 0.0) {
    st.lambda_bound = n * std::log(n) /
                      (eps_factor * eps_factor * st.gamma * st.gamma * std::pow(st.delta, 3.0));
  }
  return st;
}

CoreStructureReport core_structure(const SdpSolution& solution, const GroundTruth& truth,
                                   double rho_core, double rho_inter) {
  const int n = solution.vertex_count();
  if (truth.planted.size() != n) throw InputError("truth does not match the solution");
  CoreStructureReport rep;
  rep.rho_core = rho_core;
  rep.rho_inter = rho_inter;
  const std::vector<std::vector<int>> members = truth.planted.clusters();
  const int k = static_cast<int>(members.size());
  const EmbeddingMatrix& x = solution.embedding;

  std::vector<int> centers(k, -1);
  for (int c = 0; c < k; ++c) {
    Eigen::RowVectorXd sum = Eigen::RowVectorXd::Zero(solution.rank);
    for (const int v : members[c]) sum += x.row(v);
    // Mean squared distance to the cluster is 2 - 2 <sum, u>/|P|, so the
    // center is the member with the largest inner product against sum.
    int best = members[c][0];
    double best_score = x.row(best).dot(sum);
    for (const int v : members[c]) {
      const double score = x.row(v).dot(sum);
      if (score > best_score + 1e-15) {
        best = v;
        best_score = score;
      }
    }
    centers[c] = best;

    ClusterCore core;
    core.cluster = c;
    core.center = best;
    core.size = static_cast<int>(members[c].size());
    const double min_ip = 1.0 - 0.5 * rho_core * rho_core;
    for (const int v : members[c]) {
      if (x.row(v).dot(x.row(best)) >= min_ip) ++core.core_size;
    }
    core.core_fraction = static_cast<double>(core.core_size) / core.size;
    rep.clusters.push_back(core);
  }

  rep.center_distances.assign(k, std::vector<double>(k, 0.0));
  double min_dist = std::numeric_limits<double>::infinity();
  for (int a = 0; a < k; ++a) {
    for (int b = a + 1; b < k; ++b) {
      const double ip = x.row(centers[a]).dot(x.row(centers[b]));
      const double dist = std::sqrt(std::max(0.0, 2.0 - 2.0 * ip));
      rep.center_distances[a][b] = rep.center_distances[b][a] = dist;
      min_dist = std::min(min_dist, dist);
    }
  }
  rep.min_center_distance = k >= 2 ? min_dist : std::numeric_limits<double>::quiet_NaN();
  rep.min_core_fraction = 1.0;
  for (const ClusterCore& core : rep.clusters) {
    rep.min_core_fraction = std::min(rep.min_core_fraction, core.core_fraction);
  }
  return rep;
}

}  // namespace cc
