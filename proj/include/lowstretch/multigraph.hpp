#pragma once

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <queue>
#include <sstream>
#include <string>
#include <vector>

#include "lowstretch/common.hpp"
#include "lowstretch/union_find.hpp"

namespace lowstretch {

struct Edge {
  VertexId u;
  VertexId v;
  double length;
};

/// Weighted multigraph. Parallel edges are kept as distinct entries;
/// the position in `edges` is the stable edge identity.
struct MultiGraph {
  int n = 0;
  std::vector<Edge> edges;

  int m() const { return static_cast<int>(edges.size()); }

  VertexId other(EdgeId e, VertexId x) const {
    return edges[e].u == x ? edges[e].v : edges[e].u;
  }

  void add_edge(VertexId u, VertexId v, double length) {
    if (u == v) throw Error("self-loops are not allowed");
    edges.push_back({u, v, length});
  }

  /// CSR adjacency over edge ids (each edge listed at both endpoints).
  struct Adjacency {
    std::vector<int> start;
    std::vector<EdgeId> edge;
  };

  Adjacency adjacency() const {
    Adjacency adj;
    adj.start.assign(n + 1, 0);
    for (const Edge& e : edges) {
      ++adj.start[e.u + 1];
      ++adj.start[e.v + 1];
    }
    for (int i = 0; i < n; ++i) adj.start[i + 1] += adj.start[i];
    adj.edge.resize(2 * edges.size());
    std::vector<int> cursor(adj.start.begin(), adj.start.end() - 1);
    for (EdgeId e = 0; e < m(); ++e) {
      adj.edge[cursor[edges[e].u]++] = e;
      adj.edge[cursor[edges[e].v]++] = e;
    }
    return adj;
  }

  bool connected() const {
    if (n <= 1) return true;
    UnionFind uf(n);
    for (const Edge& e : edges) uf.unite(e.u, e.v);
    return uf.components() == 1;
  }
};

/// Rescales lengths so the minimum is 1. Returns the rescaled graph and
/// Delta = max length after rescaling.
inline std::pair<MultiGraph, double> normalize(const MultiGraph& g) {
  if (!g.connected()) throw Error("graph must be connected");
  MultiGraph out = g;
  if (g.edges.empty()) return {out, 1.0};
  double lmin = kInf, lmax = 0.0;
  for (const Edge& e : g.edges) {
    if (!(e.length > 0.0)) throw Error("edge lengths must be positive");
    lmin = std::min(lmin, e.length);
    lmax = std::max(lmax, e.length);
  }
  for (Edge& e : out.edges) e.length /= lmin;
  return {out, lmax / lmin};
}

struct QuotientResult {
  MultiGraph graph;
  std::vector<int> vertex_map;      // original vertex -> quotient vertex
  std::vector<EdgeId> edge_ids;     // quotient edge index -> original edge id
};

/// Forms G / A: one vertex per component, self-loops dropped, parallel
/// edges kept as separate copies with their original ids.
inline QuotientResult quotient(const MultiGraph& g, const UnionFind& components) {
  QuotientResult out;
  out.vertex_map.assign(g.n, -1);
  int k = 0;
  for (int v = 0; v < g.n; ++v) {
    int r = components.find(v);
    if (out.vertex_map[r] < 0) out.vertex_map[r] = k++;
    out.vertex_map[v] = out.vertex_map[r];
  }
  out.graph.n = k;
  for (EdgeId e = 0; e < g.m(); ++e) {
    int qu = out.vertex_map[g.edges[e].u];
    int qv = out.vertex_map[g.edges[e].v];
    if (qu == qv) continue;
    out.graph.edges.push_back({qu, qv, g.edges[e].length});
    out.edge_ids.push_back(e);
  }
  return out;
}

struct LengthBuckets {
  double base;
  std::vector<std::vector<EdgeId>> buckets;  // index i: lengths in [base^i, base^{i+1})
  std::vector<int> bucket_of;                // per edge

  int count() const { return static_cast<int>(buckets.size()); }
};

/// Bucket index of a length; a half-ulp guard keeps l = base^i in bucket i.
inline int length_bucket_index(double length, double base) {
  double x = std::log(length) / std::log(base);
  return static_cast<int>(std::floor(x + 1e-9));
}

inline LengthBuckets bucket_by_length(const MultiGraph& g, double base) {
  if (!(base > 1.0)) throw Error("bucket base must be > 1");
  LengthBuckets out;
  out.base = base;
  out.bucket_of.resize(g.m());
  for (EdgeId e = 0; e < g.m(); ++e) {
    if (g.edges[e].length < 1.0 - kRelSlack) throw Error("lengths must be >= 1 for bucketing");
    int i = length_bucket_index(g.edges[e].length, base);
    if (i < 0) i = 0;
    out.bucket_of[e] = i;
    if (i >= out.count()) out.buckets.resize(i + 1);
    out.buckets[i].push_back(e);
  }
  return out;
}

/// Exact weighted diameter of a component of a forest via two sweeps
/// (exact on trees). `forest_edges` index into g.edges; `component`
/// lists the vertices that must be spanned.
inline double component_diameter(const MultiGraph& g,
                                 const std::vector<EdgeId>& forest_edges,
                                 const std::vector<VertexId>& component) {
  if (component.empty()) throw Error("component is empty");
  if (component.size() == 1) return 0.0;
  // local adjacency over the component
  std::map<VertexId, std::vector<std::pair<VertexId, double>>> adj;
  for (VertexId v : component) adj[v];
  for (EdgeId e : forest_edges) {
    const Edge& ed = g.edges[e];
    if (adj.count(ed.u) && adj.count(ed.v)) {
      adj[ed.u].push_back({ed.v, ed.length});
      adj[ed.v].push_back({ed.u, ed.length});
    }
  }
  auto sweep = [&](VertexId src) {
    std::map<VertexId, double> dist;
    dist[src] = 0.0;
    std::vector<VertexId> stack{src};
    std::pair<double, VertexId> far{0.0, src};
    while (!stack.empty()) {
      VertexId x = stack.back();
      stack.pop_back();
      for (auto [y, len] : adj[x]) {
        if (dist.count(y)) continue;
        dist[y] = dist[x] + len;
        if (dist[y] > far.first) far = {dist[y], y};
        stack.push_back(y);
      }
    }
    if (dist.size() != component.size())
      throw Error("component is not connected in the forest");
    return far;
  };
  auto [d1, a] = sweep(component.front());
  auto [d2, b] = sweep(a);
  (void)b;
  return d2;
}

/// Overload on explicit weighted edges (used for decomposition levels,
/// whose lengths differ from the graph's).
inline double component_diameter(
    const std::vector<std::tuple<VertexId, VertexId, double>>& edges,
    const std::vector<VertexId>& component) {
  MultiGraph t;
  VertexId maxv = 0;
  std::vector<EdgeId> ids;
  for (auto& [u, v, len] : edges) {
    t.add_edge(u, v, len);
    ids.push_back(t.m() - 1);
    maxv = std::max({maxv, u, v});
  }
  for (VertexId v : component) maxv = std::max(maxv, v);
  t.n = maxv + 1;
  return component_diameter(t, ids, component);
}

// --- edge-list text format: "u v length", '#' comments, blanks ignored ---

inline MultiGraph read_edge_list(std::istream& in) {
  MultiGraph g;
  std::string line;
  int max_v = -1;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    VertexId u, v;
    double len;
    if (!(ls >> u)) continue;
    if (!(ls >> v >> len)) throw Error("bad edge line: " + line);
    g.add_edge(u, v, len);
    max_v = std::max({max_v, u, v});
  }
  g.n = max_v + 1;
  return g;
}

inline void write_edge_list(std::ostream& out, const MultiGraph& g,
                            const std::string& header_comment = "") {
  if (!header_comment.empty()) out << "# " << header_comment << "\n";
  out << "# n=" << g.n << " m=" << g.m() << "\n";
  for (const Edge& e : g.edges) out << e.u << " " << e.v << " " << e.length << "\n";
}

}  // namespace lowstretch
