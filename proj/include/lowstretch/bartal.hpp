#pragma once

#include <cmath>
#include <functional>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "lowstretch/common.hpp"
#include "lowstretch/multigraph.hpp"
#include "lowstretch/partition.hpp"
#include "lowstretch/union_find.hpp"

namespace lowstretch {

/// Sum of the geometric series c^{-0e} + c^{-1e} + ... for c in [e, e^2].
inline double geometric_series_bound(double c, double eps) {
  const double e1 = std::exp(1.0), e2 = std::exp(2.0);
  if (c < e1 - kRelSlack || c > e2 + kRelSlack)
    throw Error("geometric_series_bound: base outside [e, e^2]");
  if (!(eps > 0.0)) throw Error("geometric_series_bound: eps must be > 0");
  return 1.0 / (1.0 - std::pow(c, -eps));
}

/// Concrete series constant: sup over c in [e, e^2], eps in (0, 1] of
/// eps * geometric_series_bound(c, eps), attained at (e, 1).
/// Numerically 1/(1 - 1/e).
constexpr double kGeoConstant = 1.5819767068693265;

struct DiameterSequence {
  std::vector<double> d;  // d_0 > d_1 > ... > d_t, d_t < 1
  double ratio = 0.5;

  int levels() const { return static_cast<int>(d.size()); }
  int t() const { return levels() - 1; }
};

/// Halving sequence from an explicit top diameter, ending at the first
/// value below 1.
inline DiameterSequence make_diameter_sequence_from(double d0) {
  DiameterSequence dd;
  double d = d0;
  while (d >= 1.0) {
    dd.d.push_back(d);
    d /= 2.0;
  }
  dd.d.push_back(d);
  return dd;
}

/// d_i = 2 n Delta * 2^{-i}.
inline DiameterSequence make_diameter_sequence(int n, double delta_ratio) {
  if (n < 1 || delta_ratio < 1.0) throw Error("make_diameter_sequence: bad arguments");
  return make_diameter_sequence_from(2.0 * n * delta_ratio);
}

struct LevelEdge {
  EdgeId e;
  double length;  // level length, >= original length
};

struct BartalDecomposition {
  std::vector<std::vector<LevelEdge>> levels;  // B_0 .. B_t
  std::vector<int> first_cut;  // per edge: first level whose components separate it
  DiameterSequence dd;

  int t() const { return static_cast<int>(levels.size()) - 1; }
};

struct DecomposeOptions {
  double log_n = 0.0;    // ln of original vertex count; 0 = derive from graph
  double divisor = 1.0;  // partition target d_i / divisor (1 here, 3 in two-stage)
};

/// Top-down decomposition: B_0 is a shortest-path tree from vertex 0;
/// each later level drops edges of length >= d_i/log n and partitions
/// the surviving components with diameter d_i.
inline BartalDecomposition decompose_simple(const MultiGraph& g,
                                            const DiameterSequence& dd, Rng& rng,
                                            DecomposeOptions opt = {}) {
  if (!g.connected()) throw Error("decompose_simple: graph must be connected");
  const double log_n = opt.log_n > 0.0 ? opt.log_n : std::log(std::max(2, g.n));
  BartalDecomposition B;
  B.dd = dd;
  B.first_cut.assign(g.m(), -1);
  B.levels.resize(dd.levels());

  // B_0: shortest-path tree from vertex 0
  SsspResult ss = sssp(g, {{0, 0.0}});
  for (VertexId v = 0; v < g.n; ++v)
    if (ss.parent_edge[v] >= 0)
      B.levels[0].push_back({ss.parent_edge[v], g.edges[ss.parent_edge[v]].length});

  std::vector<int> comp(g.n, 0);  // component label per level, level 0: all together
  for (int i = 1; i <= dd.t(); ++i) {
    const double cutoff = dd.d[i] / log_n;
    MultiGraph sub;
    sub.n = g.n;
    std::vector<EdgeId> sub_ids;
    for (EdgeId e = 0; e < g.m(); ++e) {
      if (B.first_cut[e] >= 0) continue;
      if (comp[g.edges[e].u] != comp[g.edges[e].v]) continue;
      if (g.edges[e].length >= cutoff) continue;
      sub.edges.push_back(g.edges[e]);
      sub_ids.push_back(e);
    }
    PartitionResult part = partition(sub, dd.d[i] / opt.divisor, rng, log_n);
    // new labels: (old component, piece) pairs; pieces never straddle old
    // components because crossing edges were excluded.
    for (VertexId v = 0; v < g.n; ++v) comp[v] = part.piece[v];
    for (EdgeId qe : part.tree_edges)
      B.levels[i].push_back({sub_ids[qe], sub.edges[qe].length});
    for (EdgeId e = 0; e < g.m(); ++e) {
      if (B.first_cut[e] < 0 && comp[g.edges[e].u] != comp[g.edges[e].v])
        B.first_cut[e] = i;
    }
  }
  return B;
}

struct ValidationReport {
  bool ok = true;
  std::string message;
  int level = -1;
  EdgeId edge = -1;

  void fail(const std::string& msg, int lvl, EdgeId e = -1) {
    if (!ok) return;
    ok = false;
    message = msg;
    level = lvl;
    edge = e;
  }
};

/// Checks the five decomposition invariants exactly (modulo float slack):
/// spanning start / empty end, weighted-subgraph lengths, laminarity,
/// per-level max edge length, per-level component diameters.
inline ValidationReport validate_decomposition(const MultiGraph& g,
                                               const BartalDecomposition& B,
                                               const DiameterSequence& dd,
                                               double log_n = 0.0) {
  if (log_n <= 0.0) log_n = std::log(std::max(2, g.n));
  ValidationReport rep;
  if (B.levels.empty() || static_cast<int>(B.levels.size()) != dd.levels()) {
    rep.fail("level count does not match diameter sequence", -1);
    return rep;
  }
  // condition 1
  {
    UnionFind uf(g.n);
    for (const LevelEdge& le : B.levels[0]) uf.unite(g.edges[le.e].u, g.edges[le.e].v);
    if (uf.components() != 1) rep.fail("B_0 is not spanning", 0);
    if (!B.levels.back().empty()) rep.fail("B_t is not empty", B.t());
  }
  std::vector<int> prev_comp(g.n, 0);
  for (int i = 0; i < dd.levels() && rep.ok; ++i) {
    UnionFind uf(g.n);
    for (const LevelEdge& le : B.levels[i]) {
      const Edge& e = g.edges[le.e];
      if (le.length < e.length * (1.0 - kRelSlack))
        rep.fail("level length below original length", i, le.e);
      if (le.length > dd.d[i] / log_n * (1.0 + kRelSlack))
        rep.fail("level edge longer than d_i/log n", i, le.e);
      if (!uf.unite(e.u, e.v)) rep.fail("level forest contains a cycle", i, le.e);
    }
    if (!rep.ok) break;
    // laminarity: each level-i component maps into one level-(i-1) component
    if (i > 0) {
      std::vector<int> seen(g.n, -1);
      for (VertexId v = 0; v < g.n; ++v) {
        int r = uf.find(v);
        if (seen[r] < 0) seen[r] = prev_comp[v];
        else if (seen[r] != prev_comp[v]) rep.fail("laminarity violated", i);
      }
    }
    // component diameters
    {
      std::map<int, std::vector<VertexId>> members;
      std::map<int, std::vector<EdgeId>> edges_of;
      for (VertexId v = 0; v < g.n; ++v) members[uf.find(v)].push_back(v);
      std::map<int, std::vector<std::tuple<VertexId, VertexId, double>>> wedges;
      for (const LevelEdge& le : B.levels[i])
        wedges[uf.find(g.edges[le.e].u)].push_back(
            {g.edges[le.e].u, g.edges[le.e].v, le.length});
      for (auto& [root, verts] : members) {
        double diam = component_diameter(wedges[root], verts);
        if (diam > dd.d[i] * (1.0 + kRelSlack))
          rep.fail("component diameter exceeds d_i", i);
      }
    }
    for (VertexId v = 0; v < g.n; ++v) prev_comp[v] = uf.find(v);
  }
  return rep;
}

/// Debug/golden dump: "level i d_i" then "edge u v level_length" lines.
inline void write_decomposition(std::ostream& out, const MultiGraph& g,
                                const BartalDecomposition& B) {
  for (int i = 0; i < static_cast<int>(B.levels.size()); ++i) {
    out << "level " << i << " " << B.dd.d[i] << "\n";
    for (const LevelEdge& le : B.levels[i])
      out << "edge " << g.edges[le.e].u << " " << g.edges[le.e].v << " "
          << le.length << "\n";
  }
}

/// Converts any decomposition routine's output into an embeddable one:
/// run it on G' with lengths l^{p/q}, then scale level i (lengths and
/// diameter bound) by (c_geo/(q-p)) * (d'_i / log n)^{(q-p)/p}.
inline BartalDecomposition moment_switch(
    const MultiGraph& g, double p, double q,
    const std::function<BartalDecomposition(const MultiGraph&)>& inner,
    double log_n = 0.0) {
  if (!(0.0 < p && p < q && q < 1.0)) throw Error("moment_switch: need 0 < p < q < 1");
  if (log_n <= 0.0) log_n = std::log(std::max(2, g.n));
  MultiGraph gp = g;
  for (Edge& e : gp.edges) e.length = std::pow(e.length, p / q);
  BartalDecomposition B = inner(gp);
  for (int i = 0; i < static_cast<int>(B.levels.size()); ++i) {
    double scale = kGeoConstant / (q - p) * std::pow(B.dd.d[i] / log_n, (q - p) / p);
    for (LevelEdge& le : B.levels[i]) le.length *= scale;
    B.dd.d[i] *= scale;
  }
  return B;
}

/// Lemma-subgraph check: sum over levels of 1/level-length <= 1/l(e).
inline bool weighted_subgraph_ok(const MultiGraph& g, const BartalDecomposition& B,
                                 double* worst_ratio = nullptr) {
  std::vector<double> wsum(g.m(), 0.0);
  for (const auto& level : B.levels)
    for (const LevelEdge& le : level) wsum[le.e] += 1.0 / le.length;
  double worst = 0.0;
  for (EdgeId e = 0; e < g.m(); ++e)
    worst = std::max(worst, wsum[e] * g.edges[e].length);
  if (worst_ratio) *worst_ratio = worst;
  return worst <= 1.0 + kRelSlack;
}

}  // namespace lowstretch
