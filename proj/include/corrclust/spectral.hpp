#pragma once

#include <vector>

namespace cc {

struct WeightedEdge {
  int u = 0;
  int v = 0;
  double w = 0.0;
};

/// Second-smallest eigenvalue of the normalized Laplacian of an undirected
/// weighted graph on n vertices.  Returns 0 for n < 2 and for disconnected
/// graphs (including any isolated vertex).  Dense solve for n <= 64, Lanczos
/// with full reorthogonalization above, residual tolerance 1e-8.
double normalized_laplacian_gap(int n, const std::vector<WeightedEdge>& edges);

}  // namespace cc
