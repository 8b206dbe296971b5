#pragma once

#include <queue>
#include <tuple>
#include <vector>

#include "lowstretch/common.hpp"
#include "lowstretch/multigraph.hpp"

namespace lowstretch {

struct SsspResult {
  std::vector<double> dist;        // from the implicit super-source
  std::vector<VertexId> parent;    // -1 at sources / unreached
  std::vector<EdgeId> parent_edge; // -1 at sources / unreached
  std::vector<VertexId> source;    // winning source vertex, -1 if unreached
};

/// Multi-source Dijkstra from an implicit super-source connected to each
/// (vertex, initial distance) pair. Ties are broken deterministically:
/// smaller source id wins, then smaller parent id.
inline SsspResult sssp(const MultiGraph& g,
                       const std::vector<std::pair<VertexId, double>>& sources) {
  SsspResult r;
  r.dist.assign(g.n, kInf);
  r.parent.assign(g.n, -1);
  r.parent_edge.assign(g.n, -1);
  r.source.assign(g.n, -1);

  auto adj = g.adjacency();
  // entries: (dist, source, parent, parent_edge, vertex)
  using Entry = std::tuple<double, VertexId, VertexId, EdgeId, VertexId>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> pq;

  auto improves = [&](double nd, VertexId src, VertexId par, VertexId v) {
    if (nd < r.dist[v]) return true;
    if (nd > r.dist[v]) return false;
    if (src != r.source[v]) return src < r.source[v];
    return par < r.parent[v];
  };

  for (auto [v, d0] : sources) {
    if (d0 < 0) throw Error("initial distances must be >= 0");
    if (improves(d0, v, -1, v)) {
      r.dist[v] = d0;
      r.source[v] = v;
      pq.push({d0, v, -1, -1, v});
    }
  }
  while (!pq.empty()) {
    auto [d, src, par, pe, v] = pq.top();
    pq.pop();
    if (d != r.dist[v] || src != r.source[v] || par != r.parent[v]) continue;
    for (int i = adj.start[v]; i < adj.start[v + 1]; ++i) {
      EdgeId e = adj.edge[i];
      VertexId w = g.other(e, v);
      double nd = d + g.edges[e].length;
      if (improves(nd, src, v, w)) {
        r.dist[w] = nd;
        r.source[w] = src;
        r.parent[w] = v;
        r.parent_edge[w] = e;
        pq.push({nd, src, v, e, w});
      }
    }
  }
  return r;
}

}  // namespace lowstretch
