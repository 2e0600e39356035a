#include "corrclust/instance.hpp"

#include <algorithm>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>
#include <unordered_set>

#include "corrclust/error.hpp"
#include "corrclust/rng.hpp"

namespace cc {

namespace {

std::string edge_name(int u, int v) {
  return "(" + std::to_string(u) + "," + std::to_string(v) + ")";
}

// Pack an (u, v) pair with u < v into one 64-bit key.
std::uint64_t pair_key(std::int32_t u, std::int32_t v) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(u)) << 32) |
         static_cast<std::uint32_t>(v);
}

std::string format_real(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

}  // namespace

Instance::Instance(int n, std::vector<EdgeRecord> edges)
    : n_(n), edges_(std::move(edges)) {
  if (n_ < 0) throw InputError("vertex count must be nonnegative");
  std::sort(edges_.begin(), edges_.end(), [](const EdgeRecord& a, const EdgeRecord& b) {
    return std::pair(a.u, a.v) < std::pair(b.u, b.v);
  });
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    const EdgeRecord& e = edges_[i];
    if (e.u < 0 || e.v >= n_ || e.u >= e.v) {
      throw InputError("edge " + edge_name(e.u, e.v) + " violates 0 <= u < v < n");
    }
    if (!(e.cost >= 0.0 && e.cost <= 1.0)) {
      throw InputError("edge " + edge_name(e.u, e.v) + " has cost outside [0,1]");
    }
    if (i > 0 && edges_[i - 1].u == e.u && edges_[i - 1].v == e.v) {
      throw InputError("duplicate edge " + edge_name(e.u, e.v));
    }
  }
}

double Instance::total_cost() const {
  double total = 0.0;
  for (const EdgeRecord& e : edges_) total += e.cost;
  return total;
}

std::int64_t Instance::find_edge(int u, int v) const {
  if (u > v) std::swap(u, v);
  const auto it = std::lower_bound(
      edges_.begin(), edges_.end(), std::pair(u, v),
      [](const EdgeRecord& e, const std::pair<int, int>& key) {
        return std::pair<int, int>(e.u, e.v) < key;
      });
  if (it == edges_.end() || it->u != u || it->v != v) return -1;
  return it - edges_.begin();
}

Clustering::Clustering(std::vector<std::int32_t> labels) : labels_(std::move(labels)) {
  std::int32_t max_label = -1;
  for (std::int32_t l : labels_) {
    if (l < 0) throw InputError("cluster labels must be nonnegative");
    max_label = std::max(max_label, l);
  }
  cluster_count_ = max_label + 1;
  std::vector<bool> seen(cluster_count_, false);
  for (std::int32_t l : labels_) seen[l] = true;
  for (std::int32_t c = 0; c < cluster_count_; ++c) {
    if (!seen[c]) {
      throw InputError("cluster ids are not dense: id " + std::to_string(c) + " is empty");
    }
  }
}

Clustering Clustering::densify(const std::vector<std::int32_t>& labels) {
  std::vector<std::int32_t> dense(labels.size());
  std::vector<std::int32_t> where(labels.size(), -1);
  std::int32_t next = 0;
  for (std::size_t u = 0; u < labels.size(); ++u) {
    const std::int32_t l = labels[u];
    if (l < 0 || static_cast<std::size_t>(l) >= labels.size()) {
      throw InputError("label out of range in densify");
    }
    if (where[l] < 0) where[l] = next++;
    dense[u] = where[l];
  }
  return Clustering(std::move(dense));
}

std::vector<std::vector<std::int32_t>> Clustering::clusters() const {
  std::vector<std::vector<std::int32_t>> out(cluster_count_);
  for (std::size_t u = 0; u < labels_.size(); ++u) {
    out[labels_[u]].push_back(static_cast<std::int32_t>(u));
  }
  return out;
}

std::vector<std::int32_t> Clustering::cluster_sizes() const {
  std::vector<std::int32_t> sizes(cluster_count_, 0);
  for (std::int32_t l : labels_) ++sizes[l];
  return sizes;
}

bool edge_consistent(const EdgeRecord& e, const Clustering& p) {
  const bool same = p.label(e.u) == p.label(e.v);
  return (e.sign == Sign::plus) == same;
}

// ---------------------------------------------------------------------------
// Generators
// ---------------------------------------------------------------------------

namespace {

// Normalizes, sorts and validates an unsigned edge list.
std::vector<CostedEdge> canonical_costed_edges(const CostedGraph& graph) {
  std::vector<CostedEdge> edges = graph.edges;
  for (CostedEdge& e : edges) {
    if (e.u == e.v) throw InputError("self loop " + edge_name(e.u, e.v));
    if (e.u > e.v) std::swap(e.u, e.v);
    if (e.u < 0 || e.v >= graph.n) {
      throw InputError("edge " + edge_name(e.u, e.v) + " out of range");
    }
    if (!(e.cost >= 0.0 && e.cost <= 1.0)) {
      throw InputError("edge " + edge_name(e.u, e.v) + " has cost outside [0,1]");
    }
  }
  std::sort(edges.begin(), edges.end(), [](const CostedEdge& a, const CostedEdge& b) {
    return std::pair(a.u, a.v) < std::pair(b.u, b.v);
  });
  for (std::size_t i = 1; i < edges.size(); ++i) {
    if (edges[i - 1].u == edges[i].u && edges[i - 1].v == edges[i].v) {
      throw InputError("duplicate edge " + edge_name(edges[i].u, edges[i].v));
    }
  }
  return edges;
}

Sign consistent_sign(std::int32_t u, std::int32_t v, const Clustering& planted) {
  return planted.label(u) == planted.label(v) ? Sign::plus : Sign::minus;
}

Sign flipped(Sign s) { return s == Sign::plus ? Sign::minus : Sign::plus; }

}  // namespace

std::pair<Instance, GroundTruth> generate_basic(const CostedGraph& graph,
                                                const Clustering& planted,
                                                double epsilon,
                                                NoiseSignPolicy policy,
                                                std::uint64_t seed) {
  if (!(epsilon >= 0.0 && epsilon < 0.5)) throw InputError("epsilon out of range [0, 1/2)");
  if (planted.size() != graph.n) {
    throw InputError("planted label array length != vertex count");
  }
  const std::vector<CostedEdge> edges = canonical_costed_edges(graph);

  // Stream 0 decides E_R membership, stream 1 draws random signs; keeping
  // them separate means the membership coin for edge i is always draw i.
  CounterRng member_rng(seed, 0);
  CounterRng sign_rng(seed, 1);

  std::vector<EdgeRecord> out;
  out.reserve(edges.size());
  std::vector<std::int64_t> random_edges;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const CostedEdge& e = edges[i];
    const Sign consistent = consistent_sign(e.u, e.v, planted);
    Sign sign = consistent;
    if (member_rng.bernoulli(epsilon)) {
      random_edges.push_back(static_cast<std::int64_t>(i));
      switch (policy) {
        case NoiseSignPolicy::flip: sign = flipped(consistent); break;
        case NoiseSignPolicy::keep: sign = consistent; break;
        case NoiseSignPolicy::random_sign:
          sign = sign_rng.bernoulli(0.5) ? Sign::plus : Sign::minus;
          break;
      }
    }
    out.push_back({e.u, e.v, e.cost, sign});
  }
  // Already sorted, so edge indices survive Instance canonicalization.
  Instance instance(graph.n, std::move(out));
  return {std::move(instance), GroundTruth{planted, std::move(random_edges), epsilon}};
}

Clustering near_equal_clusters(int n, int k) {
  if (n <= 0) throw InputError("vertex count must be positive");
  if (k <= 0 || k > n) throw InputError("cluster count must be in [1, n]");
  const int base = n / k;
  const int remainder = n % k;
  std::vector<std::int32_t> labels(n);
  int vertex = 0;
  for (int c = 0; c < k; ++c) {
    // Remainder vertices go to the last `remainder` clusters, one each.
    const int size = base + (c >= k - remainder ? 1 : 0);
    for (int i = 0; i < size; ++i) labels[vertex++] = c;
  }
  return Clustering(std::move(labels));
}

std::pair<Instance, GroundTruth> generate_gnp_planted(int n, double p, int k,
                                                      double epsilon,
                                                      std::uint64_t seed) {
  if (!(p >= 0.0 && p <= 1.0)) throw InputError("edge probability p out of range [0,1]");
  const Clustering planted = near_equal_clusters(n, k);

  CounterRng edge_rng(seed, 2);
  CostedGraph graph;
  graph.n = n;
  for (std::int32_t u = 0; u < n; ++u) {
    for (std::int32_t v = u + 1; v < n; ++v) {
      if (edge_rng.bernoulli(p)) graph.edges.push_back({u, v, 1.0});
    }
  }
  return generate_basic(graph, planted, epsilon, NoiseSignPolicy::flip,
                        CounterRng::derive(seed, 3));
}

// ---------------------------------------------------------------------------
// Adaptive model
// ---------------------------------------------------------------------------

Sign AdversaryScript::noisy_sign(const AdaptiveRecord& record,
                                 const Clustering& planted_partition) {
  return flipped(consistent_sign(record.step.u, record.step.v, planted_partition));
}

std::pair<Instance, GroundTruth> generate_adaptive(AdversaryScript& script,
                                                   double epsilon,
                                                   std::uint64_t seed,
                                                   std::int64_t max_steps) {
  if (!(epsilon >= 0.0 && epsilon < 0.5)) throw InputError("epsilon out of range [0, 1/2)");
  const int n = script.vertex_count();
  const Clustering planted = script.planted();
  if (planted.size() != n) {
    throw InputError("script planted partition does not cover the vertex set");
  }

  CounterRng coin(seed, 0);  // coin t is draw t, independent of the script
  std::vector<AdaptiveRecord> history;
  std::unordered_set<std::uint64_t> proposed;
  while (true) {
    if (static_cast<std::int64_t>(history.size()) >= max_steps) {
      throw InputError("adversary script exceeded the step budget of " +
                       std::to_string(max_steps));
    }
    std::optional<AdaptiveStep> step = script.next(history);
    if (!step) break;
    AdaptiveStep s = *step;
    if (s.u == s.v) throw InputError("script proposed self loop " + edge_name(s.u, s.v));
    if (s.u > s.v) std::swap(s.u, s.v);
    if (s.u < 0 || s.v >= n) {
      throw InputError("script proposed edge " + edge_name(s.u, s.v) + " out of range");
    }
    if (!(s.cost >= 0.0 && s.cost <= 1.0)) {
      throw InputError("script proposed cost outside [0,1]");
    }
    if (!proposed.insert(pair_key(s.u, s.v)).second) {
      throw InputError("script proposed duplicate edge " + edge_name(s.u, s.v));
    }
    history.push_back({s, coin.bernoulli(epsilon)});
  }

  // Deletions: a subset of E_R, by history index.
  std::vector<bool> removed(history.size(), false);
  for (std::int64_t idx : script.removals(history)) {
    if (idx < 0 || idx >= static_cast<std::int64_t>(history.size())) {
      throw InputError("script removal index out of range");
    }
    if (!history[idx].in_random_set) {
      throw InputError("script tried to delete a non-random edge");
    }
    removed[idx] = true;
  }

  std::vector<EdgeRecord> edges;
  std::vector<std::uint64_t> random_keys;
  for (std::size_t t = 0; t < history.size(); ++t) {
    if (removed[t]) continue;
    const AdaptiveRecord& rec = history[t];
    Sign sign = rec.in_random_set ? script.noisy_sign(rec, planted)
                                  : consistent_sign(rec.step.u, rec.step.v, planted);
    edges.push_back({rec.step.u, rec.step.v, rec.step.cost, sign});
    if (rec.in_random_set) random_keys.push_back(pair_key(rec.step.u, rec.step.v));
  }

  Instance instance(n, std::move(edges));
  std::vector<std::int64_t> random_edges;
  random_edges.reserve(random_keys.size());
  for (std::uint64_t key : random_keys) {
    const auto u = static_cast<std::int32_t>(key >> 32);
    const auto v = static_cast<std::int32_t>(key & 0xFFFFFFFFu);
    random_edges.push_back(instance.find_edge(u, v));
  }
  std::sort(random_edges.begin(), random_edges.end());
  return {std::move(instance), GroundTruth{planted, std::move(random_edges), epsilon}};
}

// ---------------------------------------------------------------------------
// File formats
// ---------------------------------------------------------------------------

namespace {

[[noreturn]] void parse_fail(const std::filesystem::path& path, int line, const std::string& what) {
  throw InputError(path.string() + ":" + std::to_string(line) + ": " + what);
}

}  // namespace

void save_instance(const Instance& instance, const std::filesystem::path& path,
                   const GroundTruth* truth) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot open " + path.string() + " for writing");
  out << "cc-instance v1 " << instance.vertex_count() << ' ' << instance.edge_count() << '\n';
  for (const EdgeRecord& e : instance.edges()) {
    out << e.u << ' ' << e.v << ' ' << format_real(e.cost) << ' '
        << (e.sign == Sign::plus ? '+' : '-') << '\n';
  }
  if (!out) throw InputError("failed writing " + path.string());
  if (truth != nullptr) save_ground_truth(*truth, truth_path_for(path));
}

Instance load_instance(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  std::string magic, version;
  int n = 0;
  std::size_t m = 0;
  std::string header;
  if (!std::getline(in, header)) parse_fail(path, 1, "empty file");
  {
    std::istringstream hs(header);
    if (!(hs >> magic >> version >> n >> m) || magic != "cc-instance" || version != "v1") {
      parse_fail(path, 1, "expected header 'cc-instance v1 <n> <m>'");
    }
  }
  std::vector<EdgeRecord> edges;
  edges.reserve(m);
  std::unordered_set<std::uint64_t> seen;
  for (std::size_t i = 0; i < m; ++i) {
    const int line_no = static_cast<int>(i) + 2;
    std::string line;
    if (!std::getline(in, line)) parse_fail(path, line_no, "unexpected end of file");
    std::istringstream ls(line);
    std::int32_t u, v;
    double cost;
    char sign_ch;
    if (!(ls >> u >> v >> cost >> sign_ch) || (sign_ch != '+' && sign_ch != '-')) {
      parse_fail(path, line_no, "expected '<u> <v> <cost> <+|->'");
    }
    if (u < 0 || v < 0 || u >= v || v >= n) {
      parse_fail(path, line_no, "edge endpoints violate 0 <= u < v < n");
    }
    if (!seen.insert(pair_key(u, v)).second) {
      parse_fail(path, line_no, "duplicate edge " + edge_name(u, v));
    }
    if (!(cost >= 0.0 && cost <= 1.0)) parse_fail(path, line_no, "cost outside [0,1]");
    edges.push_back({u, v, cost, sign_ch == '+' ? Sign::plus : Sign::minus});
  }
  return Instance(n, std::move(edges));
}

std::filesystem::path truth_path_for(const std::filesystem::path& instance_path) {
  std::filesystem::path p = instance_path;
  p.replace_extension(".truth");
  return p;
}

void save_ground_truth(const GroundTruth& truth, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot open " + path.string() + " for writing");
  out << "cc-truth v1 " << truth.planted.size() << ' ' << format_real(truth.epsilon) << '\n';
  for (int u = 0; u < truth.planted.size(); ++u) {
    out << (u > 0 ? " " : "") << truth.planted.label(u);
  }
  out << '\n' << truth.random_edges.size();
  for (std::int64_t idx : truth.random_edges) out << ' ' << idx;
  out << '\n';
  if (!out) throw InputError("failed writing " + path.string());
}

GroundTruth load_ground_truth(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  std::string magic, version;
  int n = 0;
  double epsilon = 0.0;
  if (!(in >> magic >> version >> n >> epsilon) || magic != "cc-truth" || version != "v1") {
    parse_fail(path, 1, "expected header 'cc-truth v1 <n> <epsilon>'");
  }
  if (n < 0) parse_fail(path, 1, "negative vertex count");
  std::vector<std::int32_t> labels(n);
  for (int u = 0; u < n; ++u) {
    if (!(in >> labels[u])) parse_fail(path, 2, "expected " + std::to_string(n) + " labels");
  }
  std::size_t count = 0;
  if (!(in >> count)) parse_fail(path, 3, "expected random edge count");
  std::vector<std::int64_t> random_edges(count);
  for (std::size_t i = 0; i < count; ++i) {
    if (!(in >> random_edges[i])) parse_fail(path, 3, "expected random edge index");
    if (i > 0 && random_edges[i] <= random_edges[i - 1]) {
      parse_fail(path, 3, "random edge indices must be sorted and distinct");
    }
  }
  return GroundTruth{Clustering(std::move(labels)), std::move(random_edges), epsilon};
}

void save_labels(const Clustering& clustering, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot open " + path.string() + " for writing");
  out << "cc-labels v1 " << clustering.size() << '\n';
  for (int u = 0; u < clustering.size(); ++u) out << clustering.label(u) << '\n';
  if (!out) throw InputError("failed writing " + path.string());
}

Clustering load_labels(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  std::string magic, version;
  int n = 0;
  if (!(in >> magic >> version >> n) || magic != "cc-labels" || version != "v1") {
    parse_fail(path, 1, "expected header 'cc-labels v1 <n>'");
  }
  std::vector<std::int32_t> labels(n);
  for (int u = 0; u < n; ++u) {
    if (!(in >> labels[u])) parse_fail(path, u + 2, "expected label");
  }
  return Clustering(std::move(labels));
}

}  // namespace cc
