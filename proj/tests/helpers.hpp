#pragma once

#include <cmath>
#include <deque>
#include <memory>
#include <random>
#include <set>
#include <vector>

#include "hgbc/mesh.hpp"
#include "hgbc/sparse.hpp"

namespace hgbc::testing {

inline Triangulation unit_square() { return Triangulation({{0, 0}, {1, 0}, {1, 1}, {0, 1}}, {{0, 1, 2}, {0, 2, 3}}); }

inline std::shared_ptr<const Triangulation> shared(Triangulation m) {
  return std::make_shared<const Triangulation>(std::move(m));
}

// n x n cells on [0,1]^2, each split along its (0,0)-(1,1) diagonal.
inline Triangulation diagonal_grid(int n) {
  std::vector<Point> v;
  for (int j = 0; j <= n; ++j) {
    for (int i = 0; i <= n; ++i) v.push_back({double(i) / n, double(j) / n});
  }
  auto id = [n](int i, int j) { return j * (n + 1) + i; };
  std::vector<Triangle> t;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      t.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      t.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  }
  return Triangulation(std::move(v), std::move(t));
}

// Unit square split into 4 triangles through its center (vertex 4).
inline Triangulation crisscross_square() {
  return Triangulation({{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0.5, 0.5}},
                       {{0, 1, 4}, {1, 2, 4}, {2, 3, 4}, {3, 0, 4}});
}

// Dense Gaussian elimination with partial pivoting.
inline std::vector<double> dense_solve(std::vector<std::vector<double>> a, std::vector<double> b) {
  const std::size_t n = b.size();
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    for (std::size_t i = k + 1; i < n; ++i) {
      if (std::abs(a[i][k]) > std::abs(a[p][k])) p = i;
    }
    std::swap(a[k], a[p]);
    std::swap(b[k], b[p]);
    for (std::size_t i = k + 1; i < n; ++i) {
      const double f = a[i][k] / a[k][k];
      for (std::size_t j = k; j < n; ++j) a[i][j] -= f * a[k][j];
      b[i] -= f * b[k];
    }
  }
  std::vector<double> x(n);
  for (std::size_t k = n; k-- > 0;) {
    double s = b[k];
    for (std::size_t j = k + 1; j < n; ++j) s -= a[k][j] * x[j];
    x[k] = s / a[k][k];
  }
  return x;
}

// Dense oracle for the condensed Dirichlet problem.
inline std::vector<double> dense_dirichlet(const SparseMatrix& k, const std::vector<double>& rhs,
                                           const std::vector<char>& is_free, const std::vector<double>& fixed) {
  const int n = k.rows();
  std::vector<int> free;
  for (int i = 0; i < n; ++i) {
    if (is_free[i]) free.push_back(i);
  }
  std::vector<std::vector<double>> a(free.size(), std::vector<double>(free.size()));
  std::vector<double> b(free.size());
  for (std::size_t r = 0; r < free.size(); ++r) {
    b[r] = rhs[free[r]];
    for (int c = 0; c < n; ++c) {
      if (!is_free[c]) b[r] -= k.at(free[r], c) * fixed[c];
    }
    for (std::size_t c = 0; c < free.size(); ++c) a[r][c] = k.at(free[r], free[c]);
  }
  const std::vector<double> x = dense_solve(a, b);
  std::vector<double> u = fixed;
  for (std::size_t r = 0; r < free.size(); ++r) u[free[r]] = x[r];
  return u;
}

// Vertices within `k` edge hops of `start`.
inline std::set<int> bfs_within(const Triangulation& mesh, int start, int k) {
  std::vector<int> dist(mesh.vertex_count(), -1);
  std::deque<int> queue{start};
  dist[start] = 0;
  while (!queue.empty()) {
    const int v = queue.front();
    queue.pop_front();
    for (int w : mesh.vertex_neighbors(v)) {
      if (dist[w] < 0) {
        dist[w] = dist[v] + 1;
        queue.push_back(w);
      }
    }
  }
  std::set<int> out;
  for (int v = 0; v < int(mesh.vertex_count()); ++v) {
    if (dist[v] >= 0 && dist[v] <= k) out.insert(v);
  }
  return out;
}

inline std::vector<double> random_vector(std::size_t n, std::mt19937_64& rng, double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> v(n);
  for (double& x : v) x = u(rng);
  return v;
}

}  // namespace hgbc::testing
