#pragma once

#include <cmath>
#include <set>
#include <vector>

#include "lowstretch/common.hpp"
#include "lowstretch/multigraph.hpp"

namespace lowstretch {

inline MultiGraph gen_path(int n) {
  if (n < 1) throw Error("gen_path: need n >= 1");
  MultiGraph g;
  g.n = n;
  for (int v = 0; v + 1 < n; ++v) g.add_edge(v, v + 1, 1.0);
  return g;
}

inline MultiGraph gen_cycle(int n) {
  if (n < 3) throw Error("gen_cycle: need n >= 3");
  MultiGraph g = gen_path(n);
  g.add_edge(n - 1, 0, 1.0);
  return g;
}

inline MultiGraph gen_grid(int rows, int cols) {
  if (rows < 1 || cols < 1) throw Error("gen_grid: need positive dimensions");
  MultiGraph g;
  g.n = rows * cols;
  auto id = [cols](int r, int c) { return r * cols + c; };
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) {
      if (c + 1 < cols) g.add_edge(id(r, c), id(r, c + 1), 1.0);
      if (r + 1 < rows) g.add_edge(id(r, c), id(r + 1, c), 1.0);
    }
  return g;
}

/// Erdos-Renyi with a fixed edge count; lengths uniform in [1, maxlen].
/// Redrawn until connected, at most 100 attempts.
inline MultiGraph gen_er(int n, int m, double maxlen, Rng& rng) {
  if (n < 2 || m < n - 1) throw Error("gen_er: unsatisfiable size");
  long long max_m = static_cast<long long>(n) * (n - 1) / 2;
  if (m > max_m) throw Error("gen_er: more edges than vertex pairs");
  if (maxlen < 1.0) throw Error("gen_er: maxlen must be >= 1");
  for (int attempt = 0; attempt < 100; ++attempt) {
    MultiGraph g;
    g.n = n;
    std::set<std::pair<int, int>> used;
    while (static_cast<int>(used.size()) < m) {
      int u = static_cast<int>(rng.next_u64() % n);
      int v = static_cast<int>(rng.next_u64() % n);
      if (u == v) continue;
      if (u > v) std::swap(u, v);
      if (!used.insert({u, v}).second) continue;
      double len = maxlen > 1.0 ? 1.0 + rng.uniform() * (maxlen - 1.0) : 1.0;
      g.add_edge(u, v, len);
    }
    if (g.connected()) return g;
  }
  throw Error("gen_er: no connected draw within 100 attempts");
}

/// Random points in the unit square joined when within `radius`; edge
/// lengths are the Euclidean distances. Redrawn until connected, at most
/// 100 attempts.
inline MultiGraph gen_geometric(int n, double radius, Rng& rng) {
  if (n < 2 || !(radius > 0.0)) throw Error("gen_geometric: unsatisfiable spec");
  for (int attempt = 0; attempt < 100; ++attempt) {
    std::vector<std::pair<double, double>> pts(n);
    for (auto& [x, y] : pts) {
      x = rng.uniform();
      y = rng.uniform();
    }
    MultiGraph g;
    g.n = n;
    for (int u = 0; u < n; ++u)
      for (int v = u + 1; v < n; ++v) {
        double dx = pts[u].first - pts[v].first, dy = pts[u].second - pts[v].second;
        double d = std::sqrt(dx * dx + dy * dy);
        if (d <= radius && d > 0.0) g.add_edge(u, v, d);
      }
    if (g.connected()) return g;
  }
  throw Error("gen_geometric: no connected draw within 100 attempts");
}

}  // namespace lowstretch
