#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace cc {

enum class Sign : std::uint8_t { plus, minus };

struct EdgeRecord {
  std::int32_t u = 0;
  std::int32_t v = 0;
  double cost = 1.0;
  Sign sign = Sign::plus;
};

// A signed, costed graph: what the clustering algorithms see.
//
// Edges are stored sorted by (u, v) with 0 <= u < v < n, no duplicates, and
// costs in [0, 1]; the constructor canonicalizes and validates.
class Instance {
 public:
  Instance() = default;
  Instance(int n, std::vector<EdgeRecord> edges);

  int vertex_count() const { return n_; }
  std::size_t edge_count() const { return edges_.size(); }
  const std::vector<EdgeRecord>& edges() const { return edges_; }
  const EdgeRecord& edge(std::size_t i) const { return edges_[i]; }

  /// Total edge cost c(E).
  double total_cost() const;

  /// Index of edge (u, v) in the sorted edge list, or -1 if absent.
  std::int64_t find_edge(int u, int v) const;

 private:
  int n_ = 0;
  std::vector<EdgeRecord> edges_;
};

// A partition of {0..n-1} into labeled clusters; cluster ids are dense 0..k-1
// and every cluster is nonempty.
class Clustering {
 public:
  Clustering() = default;
  explicit Clustering(std::vector<std::int32_t> labels);

  /// Builds a Clustering from arbitrary labels by renumbering them densely in
  /// order of first appearance (by vertex id).
  static Clustering densify(const std::vector<std::int32_t>& labels);

  int size() const { return static_cast<int>(labels_.size()); }
  int cluster_count() const { return cluster_count_; }
  std::int32_t label(int u) const { return labels_[u]; }
  const std::vector<std::int32_t>& labels() const { return labels_; }

  /// Vertices grouped by cluster id (each group sorted ascending).
  std::vector<std::vector<std::int32_t>> clusters() const;

  std::vector<std::int32_t> cluster_sizes() const;

  bool operator==(const Clustering& other) const = default;

 private:
  std::vector<std::int32_t> labels_;
  int cluster_count_ = 0;
};

// Generator sidecar: the planted partition, the random edge set E_R (indices
// into the paired Instance's sorted edge list) and the noise rate.
struct GroundTruth {
  Clustering planted;
  std::vector<std::int64_t> random_edges;  // sorted, indices into Instance::edges()
  double epsilon = 0.0;
};

/// True iff the edge agrees with the partition: plus inside a cluster, minus
/// across clusters.
bool edge_consistent(const EdgeRecord& e, const Clustering& p);

// ---------------------------------------------------------------------------
// Generators
// ---------------------------------------------------------------------------

struct CostedEdge {
  std::int32_t u = 0;
  std::int32_t v = 0;
  double cost = 1.0;
};

/// An unsigned input graph for the basic semi-random generator.
struct CostedGraph {
  int n = 0;
  std::vector<CostedEdge> edges;
};

/// Sign choice for edges that land in E_R.  `flip` assigns the sign
/// inconsistent with the planted partition (the worst case), `keep` the
/// consistent one, `random_sign` a fair coin.
enum class NoiseSignPolicy { flip, keep, random_sign };

/// Basic semi-random model: each edge enters E_R independently with
/// probability epsilon; edges outside E_R get the sign consistent with
/// `planted`, edges in E_R get the sign chosen by `policy`.
std::pair<Instance, GroundTruth> generate_basic(const CostedGraph& graph,
                                                const Clustering& planted,
                                                double epsilon,
                                                NoiseSignPolicy policy,
                                                std::uint64_t seed);

/// k near-equal contiguous clusters over {0..n-1}; when k does not divide n,
/// the remainder vertices are appended to the last clusters, one each.
Clustering near_equal_clusters(int n, int k);

/// G(n, p) edge set with unit costs, k near-equal planted clusters, then the
/// basic generator with the flip policy.
std::pair<Instance, GroundTruth> generate_gnp_planted(int n, double p, int k,
                                                      double epsilon,
                                                      std::uint64_t seed);

// ---------------------------------------------------------------------------
// Adaptive model
// ---------------------------------------------------------------------------

struct AdaptiveStep {
  std::int32_t u = 0;
  std::int32_t v = 0;
  double cost = 1.0;
};

struct AdaptiveRecord {
  AdaptiveStep step;
  bool in_random_set = false;
};

// Deterministic edge-by-edge adversary.  The driver calls next() with the
// full history (each record carries the coin outcome for that edge), so the
// choice of e_{t+1} may depend on which earlier edges landed in E_R.  After
// the script stops, removals() may delete E_R edges and noisy_sign() assigns
// signs to the surviving E_R edges.
class AdversaryScript {
 public:
  virtual ~AdversaryScript() = default;

  virtual int vertex_count() const = 0;
  virtual Clustering planted() const = 0;

  /// Next edge to add, or nullopt to stop.  Must never repeat an edge.
  virtual std::optional<AdaptiveStep> next(std::span<const AdaptiveRecord> history) = 0;

  /// History indices of E_R edges to delete after stopping (subset of E_R).
  virtual std::vector<std::int64_t> removals(std::span<const AdaptiveRecord> history) {
    (void)history;
    return {};
  }

  /// Sign for a surviving E_R edge; default is the inconsistent sign (flip).
  virtual Sign noisy_sign(const AdaptiveRecord& record, const Clustering& planted_partition);
};

/// Replays the adaptive stochastic process with a seeded coin per step.
std::pair<Instance, GroundTruth> generate_adaptive(AdversaryScript& script,
                                                   double epsilon,
                                                   std::uint64_t seed,
                                                   std::int64_t max_steps = 1000000);

// ---------------------------------------------------------------------------
// File formats
// ---------------------------------------------------------------------------

/// Writes `cc-instance v1` text format; when `truth` is given, also writes the
/// `<stem>.truth` sidecar next to it.
void save_instance(const Instance& instance, const std::filesystem::path& path,
                   const GroundTruth* truth = nullptr);

Instance load_instance(const std::filesystem::path& path);

/// Path of the ground-truth sidecar for an instance path.
std::filesystem::path truth_path_for(const std::filesystem::path& instance_path);

void save_ground_truth(const GroundTruth& truth, const std::filesystem::path& path);

GroundTruth load_ground_truth(const std::filesystem::path& path);

/// `cc-labels v1` clustering file.
void save_labels(const Clustering& clustering, const std::filesystem::path& path);
Clustering load_labels(const std::filesystem::path& path);

}  // namespace cc
