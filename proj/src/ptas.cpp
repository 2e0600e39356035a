#include "corrclust/ptas.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "corrclust/error.hpp"
#include "corrclust/metrics.hpp"

namespace cc {

double paper_delta(const Instance& instance) {
  const double n = instance.vertex_count();
  const double total = instance.total_cost();
  if (n < 2.0 || total <= 0.0) return 0.45;
  const double d = std::pow(n * std::log(n) / total, 1.0 / 6.0);
  return std::clamp(d, 1e-6, 0.45);
}

std::pair<Instance, std::vector<int>> prune_edges(const Instance& instance,
                                                  const SdpSolution& solution, double delta) {
  if (!(delta > 0.0 && delta < 0.5)) throw InputError("delta must lie in (0, 0.5)");
  if (solution.vertex_count() != instance.vertex_count()) {
    throw InputError("solution vertex count does not match the instance");
  }
  std::vector<EdgeRecord> kept;
  std::vector<int> removed;
  kept.reserve(instance.edge_count());
  double removed_cost = 0.0;
  double objective = 0.0;
  const double threshold = 1.0 - delta;
  for (int i = 0; i < instance.edge_count(); ++i) {
    const EdgeRecord& e = instance.edges()[i];
    const double f = edge_value(solution, e);
    objective += e.cost * f;
    if (f > threshold) {
      removed.push_back(i);
      removed_cost += e.cost;
    } else {
      kept.push_back(e);
    }
  }
  const double bound = objective / (1.0 - delta);
  if (removed_cost > bound * (1.0 + 1e-12) + 1e-12) {
    throw InvariantError("pruned cost " + std::to_string(removed_cost) +
                         " exceeds sdp_objective/(1-delta) = " + std::to_string(bound));
  }
  return {Instance(instance.vertex_count(), std::move(kept)), std::move(removed)};
}

namespace {

struct IncidentEdge {
  int other;
  double cost;
  Sign sign;
};

// One local-search state: labels plus per-cluster occupancy. Cluster ids may
// have gaps while the search runs; the final labels are densified.
struct SearchState {
  std::vector<int> labels;
  std::vector<int> sizes;
};

}  // namespace

Clustering local_search_solve(const Instance& instance, const Clustering& init, int max_passes,
                              std::uint64_t /*seed*/) {
  const int n = instance.vertex_count();
  if (init.size() != n) throw InputError("initial clustering size does not match the instance");
  if (n == 0) return init;

  std::vector<std::vector<IncidentEdge>> adj(n);
  for (const EdgeRecord& e : instance.edges()) {
    adj[e.u].push_back({e.v, e.cost, e.sign});
    adj[e.v].push_back({e.u, e.cost, e.sign});
  }

  SearchState st;
  st.labels.assign(init.labels().begin(), init.labels().end());
  st.sizes.assign(init.cluster_count(), 0);
  for (int u = 0; u < n; ++u) ++st.sizes[st.labels[u]];

  std::vector<double> plus_to(st.sizes.size() + 1, 0.0);
  std::vector<double> minus_to(st.sizes.size() + 1, 0.0);
  std::vector<int> stamp(st.sizes.size() + 1, -1);
  std::vector<int> touched;
  touched.reserve(64);
  int epoch = -1;

  for (int pass = 0; pass < max_passes; ++pass) {
    bool moved = false;
    for (int u = 0; u < n; ++u) {
      if (plus_to.size() < st.sizes.size()) {
        plus_to.resize(st.sizes.size(), 0.0);
        minus_to.resize(st.sizes.size(), 0.0);
        stamp.resize(st.sizes.size(), -1);
      }
      ++epoch;
      touched.clear();
      for (const IncidentEdge& e : adj[u]) {
        const int c = st.labels[e.other];
        if (stamp[c] != epoch) {
          stamp[c] = epoch;
          plus_to[c] = 0.0;
          minus_to[c] = 0.0;
          touched.push_back(c);
        }
        (e.sign == Sign::plus ? plus_to[c] : minus_to[c]) += e.cost;
      }
      const int from = st.labels[u];
      if (stamp[from] != epoch) {
        stamp[from] = epoch;
        plus_to[from] = 0.0;
        minus_to[from] = 0.0;
      }
      // Moving u from cluster a to b changes the cost by
      // (plus_to[a] - plus_to[b]) + (minus_to[b] - minus_to[a]).
      const double base = minus_to[from] - plus_to[from];
      int best_target = from;
      double best_delta = 0.0;
      std::sort(touched.begin(), touched.end());
      for (const int c : touched) {
        if (c == from) continue;
        const double delta = plus_to[from] - plus_to[c] + minus_to[c] - minus_to[from];
        if (delta < best_delta - 1e-12) {
          best_delta = delta;
          best_target = c;
        }
      }
      // A fresh singleton; considered last so existing clusters win ties.
      if (st.sizes[from] > 1 && -base < best_delta - 1e-12) {
        best_delta = -base;
        best_target = static_cast<int>(st.sizes.size());
      }
      if (best_target != from) {
        if (best_target == static_cast<int>(st.sizes.size())) st.sizes.push_back(0);
        --st.sizes[from];
        ++st.sizes[best_target];
        st.labels[u] = best_target;
        moved = true;
      }
    }
    if (!moved) break;
  }
  // Ids can outgrow n after repeated singleton splits, so remap directly
  // instead of going through Clustering::densify.
  std::vector<int> remap(st.sizes.size(), -1);
  std::vector<std::int32_t> dense(n);
  int next = 0;
  for (int u = 0; u < n; ++u) {
    if (remap[st.labels[u]] < 0) remap[st.labels[u]] = next++;
    dense[u] = remap[st.labels[u]];
  }
  return Clustering(std::move(dense));
}

Clustering local_search_solve(const Instance& instance, int max_passes, std::uint64_t seed) {
  std::vector<int> singleton(instance.vertex_count());
  std::iota(singleton.begin(), singleton.end(), 0);
  if (instance.vertex_count() == 0) return Clustering(std::vector<int>{});
  return local_search_solve(instance, Clustering(std::move(singleton)), max_passes, seed);
}

PtasResult run_ptas(const Instance& instance, const PtasConfig& config, const GroundTruth* truth) {
  PtasResult result;
  const double delta = config.paper_schedule ? paper_delta(instance) : config.delta;
  if (!(delta > 0.0 && delta < 0.5)) throw InputError("delta must lie in (0, 0.5)");

  result.solution = solve(instance, config.solver);
  auto [residual, removed] = prune_edges(instance, result.solution, delta);
  result.clustering = local_search_solve(residual, config.local_search_max_passes);

  PtasReport& rep = result.report;
  rep.delta = delta;
  rep.sdp_objective = result.solution.objective;
  rep.converged = result.solution.trace.converged;
  for (const int i : removed) rep.pruned_cost += instance.edges()[i].cost;
  rep.residual_cost = clustering_cost(residual, result.clustering);
  rep.total_cost = clustering_cost(instance, result.clustering);

  if (truth != nullptr) {
    rep.has_truth = true;
    rep.planted_cost = clustering_cost(instance, truth->planted);
    for (const int i : removed) {
      const bool consistent = edge_consistent(instance.edges()[i], truth->planted);
      (consistent ? rep.pruned_consistent_count : rep.pruned_inconsistent_count) += 1;
    }
    const double n = instance.vertex_count();
    const double eps = truth->epsilon;
    if (n >= 2.0 && eps < 0.5) {
      const double ln = std::log(n);
      rep.unnormalized_additive_bound =
          std::pow(1.0 - 2.0 * eps, -4.0) * std::pow(delta, -3.0) * n * ln * ln * ln;
    }
  }
  return result;
}

}  // namespace cc
