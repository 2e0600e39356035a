#include "corrclust/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include <Eigen/Dense>

#include "corrclust/error.hpp"

namespace cc {

namespace {

bool connected(int n, const std::vector<WeightedEdge>& edges) {
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  int components = n;
  for (const WeightedEdge& e : edges) {
    if (e.w <= 0.0) continue;
    const int a = find(e.u), b = find(e.v);
    if (a != b) {
      parent[a] = b;
      --components;
    }
  }
  return components == 1;
}

double dense_gap(int n, const std::vector<WeightedEdge>& edges) {
  Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd deg = Eigen::VectorXd::Zero(n);
  for (const WeightedEdge& e : edges) {
    deg(e.u) += e.w;
    deg(e.v) += e.w;
  }
  const Eigen::VectorXd inv_sqrt = deg.array().sqrt().inverse();
  lap.setIdentity(n, n);
  for (const WeightedEdge& e : edges) {
    const double off = e.w * inv_sqrt(e.u) * inv_sqrt(e.v);
    lap(e.u, e.v) -= off;
    lap(e.v, e.u) -= off;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(lap, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(1);
}

// Lanczos with full reorthogonalization on M = 2I - L, deflating the known
// top eigenvector D^{1/2} 1 of M.  The largest remaining Ritz value theta
// gives the gap as 2 - theta.
double lanczos_gap(int n, const std::vector<WeightedEdge>& edges) {
  Eigen::VectorXd deg = Eigen::VectorXd::Zero(n);
  std::vector<std::vector<std::pair<int, double>>> adj(n);
  for (const WeightedEdge& e : edges) {
    deg(e.u) += e.w;
    deg(e.v) += e.w;
    adj[e.u].push_back({e.v, e.w});
    adj[e.v].push_back({e.u, e.w});
  }
  const Eigen::VectorXd inv_sqrt = deg.array().sqrt().inverse();
  Eigen::VectorXd kernel = deg.array().sqrt();
  kernel.normalize();

  auto apply = [&](const Eigen::VectorXd& x, Eigen::VectorXd& y) {
    // y = (2I - L) x = x + D^{-1/2} W D^{-1/2} x
    for (int i = 0; i < n; ++i) {
      double acc = 0.0;
      for (const auto& [j, w] : adj[i]) acc += w * inv_sqrt(j) * x(j);
      y(i) = x(i) + inv_sqrt(i) * acc;
    }
    y -= kernel.dot(y) * kernel;
  };

  const double tol = 1e-8;
  int steps = std::min(n - 1, 60);
  double best = 2.0;
  for (;;) {
    std::vector<Eigen::VectorXd> basis;
    basis.reserve(steps);
    std::vector<double> alpha, beta;
    Eigen::VectorXd q(n), next(n);
    // Deterministic start vector with weight on every coordinate.
    for (int i = 0; i < n; ++i) q(i) = 1.0 + 0.5 * std::cos(1.0 + i);
    q -= kernel.dot(q) * kernel;
    if (q.norm() < 1e-10) {
      for (int i = 0; i < n; ++i) q(i) = (i % 2 == 0) ? 1.0 : -1.0;
      q -= kernel.dot(q) * kernel;
    }
    q.normalize();

    bool breakdown = false;
    for (int s = 0; s < steps; ++s) {
      basis.push_back(q);
      apply(q, next);
      const double a = q.dot(next);
      alpha.push_back(a);
      for (const Eigen::VectorXd& b : basis) next -= b.dot(next) * b;
      for (const Eigen::VectorXd& b : basis) next -= b.dot(next) * b;
      const double norm = next.norm();
      if (norm < 1e-12) {
        breakdown = true;
        break;
      }
      beta.push_back(norm);
      q = next / norm;
    }

    const int m = static_cast<int>(alpha.size());
    Eigen::MatrixXd tri = Eigen::MatrixXd::Zero(m, m);
    for (int i = 0; i < m; ++i) {
      tri(i, i) = alpha[i];
      if (i + 1 < m) tri(i, i + 1) = tri(i + 1, i) = beta[i];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(tri);
    const int top = m - 1;
    const double theta = es.eigenvalues()(top);
    // Residual norm of the Ritz pair is |beta_m * (last component)|.
    const double resid =
        breakdown || m > static_cast<int>(beta.size())
            ? 0.0
            : std::abs(beta[m - 1] * es.eigenvectors()(m - 1, top));
    best = 2.0 - theta;
    if (breakdown || resid <= tol * std::max(1.0, std::abs(theta)) || steps >= n - 1) break;
    steps = std::min(n - 1, steps * 2);
  }
  return std::max(0.0, best);
}

}  // namespace

double normalized_laplacian_gap(int n, const std::vector<WeightedEdge>& edges) {
  if (n < 0) throw InputError("vertex count must be nonnegative");
  for (const WeightedEdge& e : edges) {
    if (e.u < 0 || e.v < 0 || e.u >= n || e.v >= n || e.u == e.v) {
      throw InputError("weighted edge endpoints out of range");
    }
    if (e.w < 0.0) throw InputError("edge weights must be nonnegative");
  }
  if (n < 2) return 0.0;
  if (!connected(n, edges)) return 0.0;
  if (n <= 64) return dense_gap(n, edges);
  return lanczos_gap(n, edges);
}

}  // namespace cc
