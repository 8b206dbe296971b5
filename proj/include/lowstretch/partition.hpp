#pragma once

#include <algorithm>
#include <vector>

#include "lowstretch/common.hpp"
#include "lowstretch/multigraph.hpp"
#include "lowstretch/sssp.hpp"

namespace lowstretch {

/// Documented cut-probability constant: the empirical per-edge cut rate
/// of partition() is at most kCutConstant * l(e) * ln(n) / d (measured
/// well below this cap on the benchmark suite).
constexpr double kCutConstant = 4.0;

struct PartitionResult {
  std::vector<int> piece;          // per vertex, 0..k-1
  std::vector<VertexId> root;      // per piece: center vertex
  std::vector<double> dist;        // per vertex: tree distance from its center
  std::vector<VertexId> parent;    // certificate shortest-path forest
  std::vector<EdgeId> parent_edge; // -1 at piece roots
  std::vector<EdgeId> cut_edges;   // endpoints in different pieces
  std::vector<EdgeId> tree_edges;  // union of certificate trees

  int pieces() const { return static_cast<int>(root.size()); }
};

/// Probabilistic low-diameter decomposition via globally shifted
/// shortest paths: vertex v draws shift s_v ~ Exp(ln(n)/d) clamped
/// to [0, d/2] and competes from a super-source at distance d/2 - s_v.
/// The clamp makes the certificate radius bound (<= d/2 per piece, so
/// diameter <= d) deterministic rather than high-probability.
///
/// `log_n` is ln of the vertex count of the original graph; callers
/// running on quotients or subgraphs pass the pipeline-level value.
inline PartitionResult partition(const MultiGraph& g, double d, Rng& rng,
                                 double log_n = 0.0) {
  if (!(d > 0.0)) throw Error("partition diameter must be > 0");
  if (g.n < 1) throw Error("partition needs at least one vertex");
  if (log_n <= 0.0) log_n = std::log(std::max(2, g.n));

  const double radius = d / 2.0;
  const double rate = log_n / d;
  std::vector<std::pair<VertexId, double>> sources;
  sources.reserve(g.n);
  for (VertexId v = 0; v < g.n; ++v) {
    double shift = std::min(rng.exponential(rate), radius);
    sources.push_back({v, radius - shift});
  }
  SsspResult ss = sssp(g, sources);

  PartitionResult out;
  out.piece.assign(g.n, -1);
  out.dist.assign(g.n, 0.0);
  out.parent = ss.parent;
  out.parent_edge = ss.parent_edge;
  // piece ids ordered by source vertex id
  std::vector<int> piece_of_source(g.n, -1);
  for (VertexId v = 0; v < g.n; ++v) {
    VertexId s = ss.source[v];
    if (piece_of_source[s] < 0) {
      piece_of_source[s] = -2;  // mark seen
    }
  }
  int k = 0;
  for (VertexId s = 0; s < g.n; ++s) {
    if (piece_of_source[s] == -2) {
      piece_of_source[s] = k++;
      out.root.push_back(s);
    }
  }
  for (VertexId v = 0; v < g.n; ++v) {
    out.piece[v] = piece_of_source[ss.source[v]];
    out.dist[v] = ss.dist[v] - ss.dist[ss.source[v]];
    if (v == ss.source[v]) {
      out.parent[v] = -1;
      out.parent_edge[v] = -1;
    }
  }
  for (EdgeId e = 0; e < g.m(); ++e) {
    if (out.piece[g.edges[e].u] != out.piece[g.edges[e].v])
      out.cut_edges.push_back(e);
  }
  for (VertexId v = 0; v < g.n; ++v)
    if (out.parent_edge[v] >= 0) out.tree_edges.push_back(out.parent_edge[v]);
  return out;
}

}  // namespace lowstretch
