#pragma once

#include <cmath>
#include <vector>

#include "lowstretch/akpw.hpp"
#include "lowstretch/bartal.hpp"
#include "lowstretch/common.hpp"
#include "lowstretch/multigraph.hpp"
#include "lowstretch/partition.hpp"
#include "lowstretch/union_find.hpp"

namespace lowstretch {

struct ScopeParams {
  double delta = 0.0;
  double q = 0.0;          // moment exponent; used by the full-mode scope rule
  bool simplified = false;
  double k = 0.0;          // simplified sparsification parameter (delta = k ln n)
  double log_n = 0.0;      // ln of original vertex count
  int max_retries = 10;
};

/// Cluster rounds folded wholesale into a level of diameter d.
/// Full mode: largest j with delta^{j + 1/(1-q) + 1} <= d, so cluster
/// diameter delta^{j+1} stays a delta^{1/(1-q)} factor below d.
/// Simplified mode: floor(log_delta d) - 3.
inline int scope_level(double d, const ScopeParams& sp) {
  if (!(d > 0.0)) return -1;
  double ld = std::log(d) / std::log(sp.delta);
  int j;
  if (sp.simplified) {
    j = static_cast<int>(std::floor(ld + 1e-9)) - 3;
  } else {
    j = static_cast<int>(std::floor(ld - 1.0 / (1.0 - sp.q) - 1.0 + 1e-9));
  }
  return std::max(j, -1);
}

struct ImplicitLevel {
  double d = 0.0;       // diameter bound used during construction (pre-scale)
  int scope = -1;       // cluster rounds 0..scope included wholesale; -1 = none
  double scale = 1.0;   // length multiplier applied on expansion
  std::vector<LevelEdge> explicit_edges;            // inter-cluster edges, raised lengths
  std::vector<std::pair<VertexId, int>> cluster_piece;  // cluster root -> piece id
  int n_pieces = 0;
};

struct ImplicitDecomposition {
  std::vector<ImplicitLevel> levels;
  DiameterSequence dd;              // pre-scale diameters
  std::vector<int> first_cut;       // -1 while together / for ignored edges
  std::vector<char> ignored;        // simplified-mode sparsified edges (set S)
  std::vector<int> participation;   // levels in which each edge was examined
  int retries = 0;

  int t() const { return static_cast<int>(levels.size()) - 1; }
  int ignored_count() const {
    int c = 0;
    for (char x : ignored) c += x;
    return c;
  }
};

/// Components of the cluster forest restricted to rounds 0..scope.
/// Deterministic: forest edges are united in stored order, so root ids
/// are reproducible across construction and expansion.
inline UnionFind scoped_clusters(const MultiGraph& g, const AKPWDecomposition& A,
                                 int scope) {
  UnionFind uf(g.n);
  for (size_t i = 0; i < A.forest_edges.size(); ++i) {
    if (A.join_level[i] > scope) continue;
    EdgeId e = A.forest_edges[i];
    uf.unite(g.edges[e].u, g.edges[e].v);
  }
  return uf;
}

namespace detail {

inline ImplicitDecomposition two_stage_once(const MultiGraph& g,
                                            const AKPWDecomposition& A,
                                            const DiameterSequence& dd, Rng& rng,
                                            const ScopeParams& sp) {
  const double log_n = sp.log_n > 0.0 ? sp.log_n : std::log(std::max(2, g.n));
  ImplicitDecomposition I;
  I.dd = dd;
  I.first_cut.assign(g.m(), -1);
  I.ignored.assign(g.m(), 0);
  I.participation.assign(g.m(), 0);
  I.levels.resize(dd.levels());

  if (sp.simplified) {
    for (EdgeId e = 0; e < g.m(); ++e)
      if (A.cut(e) && A.in_forest[e] == 0) I.ignored[e] = 1;
  }

  // level 0: the whole cluster forest as a single piece per component
  {
    ImplicitLevel& L = I.levels[0];
    L.d = dd.d[0];
    L.scope = A.rounds - 1;
    UnionFind uf = scoped_clusters(g, A, L.scope);
    std::vector<int> piece_of_root(g.n, -1);
    for (VertexId v = 0; v < g.n; ++v) {
      int r = uf.find(v);
      if (piece_of_root[r] < 0) {
        piece_of_root[r] = L.n_pieces++;
        L.cluster_piece.push_back({r, piece_of_root[r]});
      }
    }
  }

  std::vector<int> comp(g.n, 0);
  {
    UnionFind uf0 = scoped_clusters(g, A, I.levels[0].scope);
    for (VertexId v = 0; v < g.n; ++v) comp[v] = uf0.find(v);
  }

  for (int i = 1; i <= dd.t(); ++i) {
    ImplicitLevel& L = I.levels[i];
    L.d = dd.d[i];
    L.scope = std::min(scope_level(dd.d[i], sp), A.rounds - 1);
    const double cluster_scale = std::pow(sp.delta, L.scope + 1);
    const double cutoff = dd.d[i] / log_n;

    UnionFind uf = scoped_clusters(g, A, L.scope);
    QuotientResult q = quotient(g, uf);

    // candidate edges: same current piece, different clusters; lengths are
    // floated up to the cluster diameter scale
    MultiGraph qg;
    qg.n = q.graph.n;
    std::vector<EdgeId> qids;
    for (int j = 0; j < q.graph.m(); ++j) {
      EdgeId e = q.edge_ids[j];
      if (I.ignored[e] || I.first_cut[e] >= 0) continue;
      if (comp[g.edges[e].u] != comp[g.edges[e].v]) continue;
      double used = std::max(g.edges[e].length, cluster_scale);
      if (used >= cutoff) {
        if (sp.simplified && g.edges[e].length < cutoff) I.ignored[e] = 1;
        continue;
      }
      ++I.participation[e];  // edge reached this level's partition input
      qg.edges.push_back({q.graph.edges[j].u, q.graph.edges[j].v, used});
      qids.push_back(e);
    }

    PartitionResult part = partition(qg, dd.d[i] / 3.0, rng, log_n);
    L.n_pieces = part.pieces();
    for (EdgeId qe : part.tree_edges) {
      EdgeId e = qids[qe];
      L.explicit_edges.push_back({e, std::max(g.edges[e].length, cluster_scale)});
    }
    // new piece labels on original vertices; pieces cannot straddle old
    // pieces because crossing edges were excluded from the quotient
    std::vector<char> root_seen(g.n, 0);
    for (VertexId v = 0; v < g.n; ++v) {
      comp[v] = part.piece[q.vertex_map[v]];
      int r = uf.find(v);
      if (!root_seen[r]) {
        root_seen[r] = 1;
        L.cluster_piece.push_back({r, part.piece[q.vertex_map[v]]});
      }
    }
    for (EdgeId e = 0; e < g.m(); ++e) {
      if (I.ignored[e] || I.first_cut[e] >= 0) continue;
      if (comp[g.edges[e].u] != comp[g.edges[e].v]) I.first_cut[e] = i;
    }
  }
  return I;
}

}  // namespace detail

/// Two-stage decomposition over a prebuilt cluster hierarchy. In
/// simplified mode, edges the clustering cut too late and edges removed
/// by the length float are dropped from consideration (set S); if S
/// exceeds a 4/k fraction of the edges the construction is redrawn, up
/// to max_retries times.
inline ImplicitDecomposition decompose_two_stage(const MultiGraph& g,
                                                 const AKPWDecomposition& A,
                                                 const DiameterSequence& dd, Rng& rng,
                                                 const ScopeParams& sp) {
  if (!g.connected()) throw Error("decompose_two_stage: graph must be connected");
  if (!(sp.delta > 1.0)) throw Error("decompose_two_stage: delta must be > 1");
  ImplicitDecomposition I = detail::two_stage_once(g, A, dd, rng, sp);
  if (sp.simplified && sp.k > 0.0 && g.m() > 0) {
    int tries = 0;
    while (static_cast<double>(I.ignored_count()) / g.m() > 4.0 / sp.k &&
           tries < sp.max_retries) {
      ++tries;
      I = detail::two_stage_once(g, A, dd, rng, sp);
    }
    I.retries = tries;
  }
  return I;
}

/// Materializes the per-level edge lists: each level holds the scoped
/// cluster forest plus its explicit inter-cluster edges, with the level's
/// length multiplier applied.
inline BartalDecomposition expand_to_explicit(const MultiGraph& g,
                                              const AKPWDecomposition& A,
                                              const ImplicitDecomposition& I) {
  BartalDecomposition B;
  B.first_cut = I.first_cut;
  B.dd = I.dd;
  B.levels.resize(I.levels.size());
  for (size_t i = 0; i < I.levels.size(); ++i) {
    const ImplicitLevel& L = I.levels[i];
    B.dd.d[i] = L.d * L.scale;
    for (size_t j = 0; j < A.forest_edges.size(); ++j) {
      if (A.join_level[j] > L.scope) continue;
      EdgeId e = A.forest_edges[j];
      B.levels[i].push_back({e, g.edges[e].length * L.scale});
    }
    for (const LevelEdge& le : L.explicit_edges)
      B.levels[i].push_back({le.e, le.length * L.scale});
  }
  return B;
}

struct ParticipationStats {
  double mean = 0.0;
  int max = 0;
};

inline ParticipationStats participation_stats(const ImplicitDecomposition& I) {
  ParticipationStats s;
  if (I.participation.empty()) return s;
  long long total = 0;
  for (int c : I.participation) {
    total += c;
    s.max = std::max(s.max, c);
  }
  s.mean = static_cast<double>(total) / I.participation.size();
  return s;
}

}  // namespace lowstretch
