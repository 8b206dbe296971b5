#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "lowstretch/bartal.hpp"
#include "lowstretch/common.hpp"
#include "lowstretch/multigraph.hpp"
#include "lowstretch/steiner.hpp"

namespace lowstretch {

struct StretchReport {
  double p = 1.0;
  std::vector<double> stretch;     // per edge; -1 for excluded edges
  std::vector<double> lp;          // stretch^p; -1 for excluded edges
  int included = 0;
  int excluded = 0;
  double mean_stretch = 0.0, max_stretch = 0.0;
  double mean_lp = 0.0, max_lp = 0.0;

  /// Quantile over included edges' plain stretch, linear interpolation.
  double quantile(double q) const {
    std::vector<double> xs;
    for (double s : stretch)
      if (s >= 0.0) xs.push_back(s);
    if (xs.empty()) return 0.0;
    std::sort(xs.begin(), xs.end());
    double pos = q * (xs.size() - 1);
    size_t lo = static_cast<size_t>(pos);
    size_t hi = std::min(lo + 1, xs.size() - 1);
    return xs[lo] + (pos - lo) * (xs[hi] - xs[lo]);
  }

  void finalize() {
    included = excluded = 0;
    mean_stretch = max_stretch = mean_lp = max_lp = 0.0;
    for (size_t i = 0; i < stretch.size(); ++i) {
      if (stretch[i] < 0.0) {
        ++excluded;
        continue;
      }
      ++included;
      mean_stretch += stretch[i];
      mean_lp += lp[i];
      max_stretch = std::max(max_stretch, stretch[i]);
      max_lp = std::max(max_lp, lp[i]);
    }
    if (included > 0) {
      mean_stretch /= included;
      mean_lp /= included;
    }
  }
};

namespace detail {

/// Rooted tree with binary lifting for O(log n) ancestor queries.
struct TreeLca {
  int n = 0;
  std::vector<int> depth;
  std::vector<double> dist;
  std::vector<std::vector<int>> up;
  int levels = 1;

  TreeLca(int n_total, const std::vector<SteinerTree::TEdge>& edges) : n(n_total) {
    std::vector<std::vector<std::pair<int, double>>> adj(n);
    for (const auto& e : edges) {
      adj[e.u].push_back({e.v, e.length});
      adj[e.v].push_back({e.u, e.length});
    }
    depth.assign(n, -1);
    dist.assign(n, 0.0);
    while ((1 << levels) < std::max(n, 2)) ++levels;
    up.assign(levels, std::vector<int>(n, -1));
    std::vector<int> stack;
    for (int r = 0; r < n; ++r) {
      if (depth[r] >= 0) continue;
      depth[r] = 0;
      stack.push_back(r);
      while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (auto [w, len] : adj[v]) {
          if (depth[w] >= 0) continue;
          depth[w] = depth[v] + 1;
          dist[w] = dist[v] + len;
          up[0][w] = v;
          stack.push_back(w);
        }
      }
    }
    for (int k = 1; k < levels; ++k)
      for (int v = 0; v < n; ++v)
        up[k][v] = up[k - 1][v] < 0 ? -1 : up[k - 1][up[k - 1][v]];
  }

  int lca(int a, int b) const {
    if (depth[a] < depth[b]) std::swap(a, b);
    int diff = depth[a] - depth[b];
    for (int k = 0; k < levels; ++k)
      if (diff >> k & 1) a = up[k][a];
    if (a == b) return a;
    for (int k = levels - 1; k >= 0; --k)
      if (up[k][a] != up[k][b]) {
        a = up[k][a];
        b = up[k][b];
      }
    return up[0][a];
  }

  double distance(int a, int b) const {
    return dist[a] + dist[b] - 2.0 * dist[lca(a, b)];
  }
};

}  // namespace detail

/// Per-edge stretch of the tree: tree-path length over edge length.
/// Edges listed in `excluded` are skipped (reported as -1).
inline StretchReport tree_stretch(const MultiGraph& g, const SteinerTree& T, double p,
                                  const std::vector<char>& excluded = {}) {
  if (!(p > 0.0 && p <= 1.0)) throw Error("tree_stretch: need 0 < p <= 1");
  if (static_cast<int>(T.pi.size()) < g.n)
    throw Error("tree_stretch: tree does not cover all graph vertices");
  for (int v = 0; v < g.n; ++v)
    if (T.pi[v] < 0 || T.pi[v] >= T.n_total)
      throw Error("tree_stretch: vertex missing from the tree map");
  detail::TreeLca lca(T.n_total, T.edges);
  StretchReport rep;
  rep.p = p;
  rep.stretch.assign(g.m(), -1.0);
  rep.lp.assign(g.m(), -1.0);
  for (EdgeId e = 0; e < g.m(); ++e) {
    if (!excluded.empty() && excluded[e]) continue;
    double dT = lca.distance(T.pi[g.edges[e].u], T.pi[g.edges[e].v]);
    rep.stretch[e] = dT / g.edges[e].length;
    rep.lp[e] = std::pow(rep.stretch[e], p);
  }
  rep.finalize();
  return rep;
}

/// Stretch implied by the decomposition alone: (d_i / l(e))^p at the
/// first level whose components separate the edge.
inline StretchReport decomposition_stretch(const MultiGraph& g,
                                           const std::vector<int>& first_cut,
                                           const DiameterSequence& dd, double p,
                                           const std::vector<char>& excluded = {}) {
  if (!(p > 0.0 && p <= 1.0)) throw Error("decomposition_stretch: need 0 < p <= 1");
  StretchReport rep;
  rep.p = p;
  rep.stretch.assign(g.m(), -1.0);
  rep.lp.assign(g.m(), -1.0);
  for (EdgeId e = 0; e < g.m(); ++e) {
    if (!excluded.empty() && excluded[e]) continue;
    if (first_cut[e] < 0)
      throw Error("decomposition_stretch: edge " + std::to_string(e) +
                  " is never cut (decomposition does not end empty)");
    rep.stretch[e] = dd.d[first_cut[e]] / g.edges[e].length;
    rep.lp[e] = std::pow(rep.stretch[e], p);
  }
  rep.finalize();
  return rep;
}

struct EmbeddingReport {
  bool ok = true;
  bool structure_ok = true;   // connected, acyclic, vertex budget
  bool paths_ok = true;       // certificate paths walk endpoint to endpoint
  bool congestion_ok = true;  // per graph edge, allocated weight <= its weight
  bool dilation_ok = true;    // per tree edge, path length <= edge length
  double max_congestion = 0.0;  // max over edges of allocated/available weight
  double max_dilation = 0.0;    // max over tree edges of path/edge length
  std::string message;

  void fail(bool& flag, const std::string& msg) {
    flag = false;
    ok = false;
    if (message.empty()) message = msg;
  }
};

/// Exact certificate check: walks every tree edge's path through the
/// graph (locating helper vertices on the way), sums the allocated
/// weights per graph edge against 1/length, and sums reciprocal weights
/// per tree edge against its length.
inline EmbeddingReport verify_embedding(const MultiGraph& g, const SteinerTree& T) {
  EmbeddingReport rep;
  if (T.n_total > 2 * std::max(g.n, 1) - 1)
    rep.fail(rep.structure_ok, "more than 2n-1 tree vertices");
  if (static_cast<int>(T.edges.size()) != T.n_total - 1)
    rep.fail(rep.structure_ok, "edge count is not n_total-1");
  UnionFind uf(T.n_total);
  for (const auto& te : T.edges)
    if (te.u == te.v || !uf.unite(te.u, te.v))
      rep.fail(rep.structure_ok, "tree contains a cycle or self-loop");
  if (uf.components() != 1) rep.fail(rep.structure_ok, "tree is not connected");
  if (!rep.structure_ok) return rep;

  // locate every tree vertex at a graph vertex by walking certificate
  // paths outward from the original vertices
  std::vector<VertexId> loc(T.n_total, -1);
  for (int v = 0; v < T.n_original; ++v) {
    if (T.pi[v] < 0 || T.pi[v] >= T.n_total) {
      rep.fail(rep.paths_ok, "vertex map out of range");
      return rep;
    }
    loc[T.pi[v]] = v;
  }
  std::vector<std::vector<std::pair<int, int>>> tadj(T.n_total);  // (other, edge, dir)
  for (int j = 0; j < static_cast<int>(T.edges.size()); ++j) {
    tadj[T.edges[j].u].push_back({T.edges[j].v, j});
    tadj[T.edges[j].v].push_back({T.edges[j].u, j});
  }
  auto walk = [&](VertexId from, const std::vector<PathHop>& path, bool forward) {
    VertexId at = from;
    for (size_t h = 0; h < path.size(); ++h) {
      const PathHop& hop = path[forward ? h : path.size() - 1 - h];
      if (hop.e < 0 || hop.e >= g.m()) return VertexId(-1);
      const Edge& e = g.edges[hop.e];
      if (e.u == at) at = e.v;
      else if (e.v == at) at = e.u;
      else return VertexId(-1);
    }
    return at;
  };
  std::vector<int> start;
  for (int v = 0; v < T.n_total; ++v)
    if (loc[v] >= 0) start.push_back(v);
  std::vector<char> visited(T.n_total, 0);
  for (int s : start) {
    if (visited[s]) continue;
    std::vector<int> stack{s};
    visited[s] = 1;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (auto [w, j] : tadj[v]) {
        if (visited[w]) continue;
        bool forward = T.edges[j].u == v;
        VertexId end = walk(loc[v], T.edges[j].path, forward);
        if (end < 0) {
          rep.fail(rep.paths_ok, "certificate path does not walk through the graph");
          return rep;
        }
        if (loc[w] >= 0 && loc[w] != end) {
          rep.fail(rep.paths_ok, "certificate path ends at the wrong vertex");
          return rep;
        }
        loc[w] = end;
        visited[w] = 1;
        stack.push_back(w);
      }
    }
  }
  for (const auto& te : T.edges) {
    if (te.path.empty()) rep.fail(rep.paths_ok, "tree edge without a certificate path");
    if (loc[te.u] == loc[te.v])
      rep.fail(rep.paths_ok, "tree edge maps both endpoints to one graph vertex");
  }

  std::vector<double> allocated(g.m(), 0.0);
  for (const auto& te : T.edges) {
    double path_len = 0.0;
    for (const PathHop& h : te.path) {
      if (!(h.weight > 0.0)) {
        rep.fail(rep.paths_ok, "nonpositive certificate weight");
        return rep;
      }
      allocated[h.e] += h.weight;
      path_len += 1.0 / h.weight;
    }
    double dil = path_len / te.length;
    rep.max_dilation = std::max(rep.max_dilation, dil);
    if (dil > 1.0 + kRelSlack) rep.fail(rep.dilation_ok, "dilation above one");
  }
  for (EdgeId e = 0; e < g.m(); ++e) {
    double cong = allocated[e] * g.edges[e].length;  // vs available weight 1/l
    rep.max_congestion = std::max(rep.max_congestion, cong);
    if (cong > 1.0 + kRelSlack) rep.fail(rep.congestion_ok, "congestion above one");
  }
  return rep;
}

struct MonteCarloStats {
  int trials = 0;
  double mean = 0.0;
  double variance = 0.0;  // sample variance
  double stddev = 0.0;
  double ci_halfwidth(double z = 3.0) const {
    return trials > 0 ? z * stddev / std::sqrt(static_cast<double>(trials)) : 0.0;
  }
};

/// Runs a seeded estimator `trials` times with counter-derived per-trial
/// seeds; aggregation is order-independent given the seed list.
template <class F>
MonteCarloStats monte_carlo(int trials, unsigned long long master_seed, F&& estimator) {
  if (trials <= 0) throw Error("monte_carlo: need at least one trial");
  MonteCarloStats s;
  s.trials = trials;
  double sum = 0.0, sumsq = 0.0;
  for (int i = 0; i < trials; ++i) {
    double x = estimator(Rng::derive_seed(master_seed, i));
    sum += x;
    sumsq += x * x;
  }
  s.mean = sum / trials;
  if (trials > 1) s.variance = std::max(0.0, (sumsq - sum * sum / trials) / (trials - 1));
  s.stddev = std::sqrt(s.variance);
  return s;
}

}  // namespace lowstretch
