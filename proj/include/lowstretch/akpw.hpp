#pragma once

#include <iostream>
#include <limits>
#include <map>
#include <vector>

#include "lowstretch/common.hpp"
#include "lowstretch/multigraph.hpp"
#include "lowstretch/partition.hpp"
#include "lowstretch/union_find.hpp"

namespace lowstretch {

/// Union-find without path compression that remembers when each link was
/// made. Link times are nondecreasing along root paths, so the round at
/// which two vertices became connected is the max link time on the paths
/// to their lowest common ancestor. Union by rank keeps paths O(log n).
class LinkForest {
public:
  explicit LinkForest(int n) : parent_(n, -1), time_(n, -1), rank_(n, 0) {}

  int root(int x) const {
    while (parent_[x] >= 0) x = parent_[x];
    return x;
  }

  bool link(int a, int b, int t) {
    a = root(a);
    b = root(b);
    if (a == b) return false;
    if (rank_[a] < rank_[b]) std::swap(a, b);
    parent_[b] = a;
    time_[b] = t;
    if (rank_[a] == rank_[b]) ++rank_[a];
    return true;
  }

  static constexpr int kNever = std::numeric_limits<int>::max();

  /// First time at which u and v were in the same tree; kNever if they
  /// still are not.
  int connect_level(int u, int v) const {
    if (u == v) return 0;  // a vertex is always in its own cluster
    std::map<int, int> anc;  // ancestor of u -> max link time on the way up
    int t = -1, cur = u;
    anc[cur] = t;
    while (parent_[cur] >= 0) {
      t = std::max(t, time_[cur]);
      cur = parent_[cur];
      anc[cur] = t;
    }
    t = -1;
    cur = v;
    while (true) {
      auto it = anc.find(cur);
      if (it != anc.end()) return std::max(t, it->second);
      if (parent_[cur] < 0) return kNever;
      t = std::max(t, time_[cur]);
      cur = parent_[cur];
    }
  }

private:
  std::vector<int> parent_;
  std::vector<int> time_;
  std::vector<int> rank_;
};

/// Bottom-up cluster hierarchy A_0 subseteq A_1 subseteq ... built by
/// repeatedly partitioning the cluster quotient with unit edge lengths.
struct AKPWDecomposition {
  double delta = 0.0;
  int rounds = 0;                    // rounds executed; last round index is rounds-1
  std::vector<EdgeId> forest_edges;  // the final spanning forest, original edge ids
  std::vector<int> join_level;      // per forest edge: round in which it was added
  std::vector<int> bucket_of;       // per original edge: floor(log_delta l)
  std::vector<char> in_forest;      // per original edge
  LinkForest links{0};

  /// Round at which u and v were merged into one cluster.
  int connect_level(VertexId u, VertexId v) const { return links.connect_level(u, v); }

  /// Edges whose endpoints stayed separated well past the edge's own
  /// length scale; these are exactly the edges the certificate trees
  /// failed to capture early.
  bool cut(EdgeId e) const { return edge_connect_level[e] > bucket_of[e] + 1; }

  std::vector<int> edge_connect_level;  // cached per original edge
};

struct AkpwOptions {
  double log_n = 0.0;   // ln of the original vertex count
  int max_extra_rounds = 4096;  // safety cap past the top bucket
  bool warn_small_delta = true;
};

/// Builds the hierarchy: in round s, edges of length < delta^{s+1} whose
/// endpoints lie in different clusters form a unit-length quotient graph,
/// which is partitioned with diameter delta/3; the certificate forests
/// become new cluster spines. Cluster diameter after round s is at most
/// delta^{s+1} (the /3 pays for the two cluster radii plus the new edge).
inline AKPWDecomposition akpw(const MultiGraph& g, double delta, Rng& rng,
                              AkpwOptions opt = {}) {
  // with delta/6 <= 1 the clamped shifts can never reach across a unit
  // quotient edge and no round makes progress
  if (!(delta > 6.0)) throw Error("akpw: delta must be > 6");
  if (!g.connected()) throw Error("akpw: graph must be connected");
  const double log_n = opt.log_n > 0.0 ? opt.log_n : std::log(std::max(2, g.n));
  if (opt.warn_small_delta && delta < 2.0 * kCutConstant * log_n)
    std::cerr << "warning: akpw delta=" << delta
              << " is below 2*" << kCutConstant << "*ln(n)=" << 2.0 * kCutConstant * log_n
              << "; cut-fraction guarantees degrade\n";

  AKPWDecomposition A;
  A.delta = delta;
  A.links = LinkForest(g.n);
  LengthBuckets lb = g.m() > 0 ? bucket_by_length(g, delta) : LengthBuckets{delta, {}, {}};
  A.bucket_of = lb.bucket_of;

  UnionFind uf(g.n);
  int s = 0;
  const int cap = lb.count() + opt.max_extra_rounds;
  while (uf.components() > 1) {
    if (s > cap) throw Error("akpw: did not connect within the round cap");
    // quotient by current clusters, unit lengths, eligible buckets 0..s
    QuotientResult q = quotient(g, uf);
    MultiGraph qg;
    qg.n = q.graph.n;
    std::vector<EdgeId> qids;
    for (int i = 0; i < q.graph.m(); ++i) {
      if (lb.bucket_of[q.edge_ids[i]] > s) continue;
      qg.edges.push_back({q.graph.edges[i].u, q.graph.edges[i].v, 1.0});
      qids.push_back(q.edge_ids[i]);
    }
    PartitionResult part = partition(qg, delta / 3.0, rng, log_n);
    for (EdgeId qe : part.tree_edges) {
      EdgeId e = qids[qe];
      uf.unite(g.edges[e].u, g.edges[e].v);
      A.links.link(g.edges[e].u, g.edges[e].v, s);
      A.forest_edges.push_back(e);
      A.join_level.push_back(s);
    }
    ++s;
  }
  A.rounds = std::max(s, 1);
  A.in_forest.assign(g.m(), 0);
  for (EdgeId e : A.forest_edges) A.in_forest[e] = 1;
  A.edge_connect_level.resize(g.m());
  for (EdgeId e = 0; e < g.m(); ++e)
    A.edge_connect_level[e] = A.links.connect_level(g.edges[e].u, g.edges[e].v);
  return A;
}

}  // namespace lowstretch
