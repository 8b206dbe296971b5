#pragma once

#include <cmath>
#include <vector>

#include "lowstretch/akpw.hpp"
#include "lowstretch/bartal.hpp"
#include "lowstretch/common.hpp"
#include "lowstretch/multigraph.hpp"
#include "lowstretch/steiner.hpp"
#include "lowstretch/two_stage.hpp"

namespace lowstretch {

struct PipelineOptions {
  double p = 0.5;         // stretch exponent, 0 < p < 1
  bool simplified = false;
  double k = 4.0;         // simplified-mode sparsification parameter
  bool check = true;      // validate the expanded decomposition
};

struct PipelineResult {
  SteinerTree tree;            // embeds into the input graph
  MultiGraph normalized;       // input scaled so min length = 1
  MultiGraph powered;          // normalized with lengths l^{p/q}
  AKPWDecomposition akpw;
  ImplicitDecomposition impl;  // levels carry the moment scale factors
  double q = 0.0;
  double delta = 0.0;
  double log_n = 0.0;
  double lmin = 1.0;           // normalization factor undone on the tree
  bool trivial = false;        // tiny instance handled directly

  /// Materialized per-level decomposition with scales applied; validates
  /// against the normalized graph.
  BartalDecomposition explicit_decomposition() const {
    return expand_to_explicit(powered, akpw, impl);
  }
};

/// End-to-end construction: normalize, raise lengths to p/q, cluster
/// bottom-up, decompose top-down over the scoped clusters, apply the
/// per-level moment scales, and expand straight from the implicit
/// representation. The tree's lengths and certificate are rescaled back
/// to the input graph's units.
inline PipelineResult full_pipeline(const MultiGraph& g, unsigned long long seed,
                                    PipelineOptions opt = {}) {
  if (!(opt.p > 0.0 && opt.p < 1.0)) throw Error("full_pipeline: need 0 < p < 1");
  if (!g.connected()) throw Error("full_pipeline: graph must be connected");

  PipelineResult R;
  if (g.n <= 2) {
    // single vertex or single pair: the tree is the cheapest edge itself
    R.trivial = true;
    R.tree.n_original = g.n;
    R.tree.n_total = g.n;
    R.tree.pi.resize(g.n);
    for (int v = 0; v < g.n; ++v) R.tree.pi[v] = v;
    if (g.n == 2) {
      EdgeId best = 0;
      for (EdgeId e = 1; e < g.m(); ++e)
        if (g.edges[e].length < g.edges[best].length) best = e;
      R.tree.edges.push_back({g.edges[best].u, g.edges[best].v,
                              g.edges[best].length,
                              {{best, 1.0 / g.edges[best].length}}});
    }
    return R;
  }

  Rng rng(seed);
  const double p = opt.p;
  R.q = (1.0 + p) / 2.0;
  R.log_n = std::log(static_cast<double>(g.n));
  auto [gn, delta_ratio] = normalize(g);
  (void)delta_ratio;
  R.normalized = std::move(gn);
  double lmin = kInf;
  for (const Edge& e : g.edges) lmin = std::min(lmin, e.length);
  R.lmin = lmin;

  R.powered = R.normalized;
  for (Edge& e : R.powered.edges) e.length = std::pow(e.length, p / R.q);

  ScopeParams sp;
  sp.q = R.q;
  sp.simplified = opt.simplified;
  sp.k = opt.k;
  sp.log_n = R.log_n;
  // clamp keeps the clustering stage able to make progress (see akpw)
  if (opt.simplified) {
    sp.delta = std::max(opt.k * R.log_n, 7.0);
  } else {
    sp.delta = std::max(std::pow(kCutConstant * R.log_n, 1.0 / (R.q - p)), 7.0);
  }
  R.delta = sp.delta;

  AkpwOptions ao;
  ao.log_n = R.log_n;
  ao.warn_small_delta = false;  // delta is derived from log n above
  R.akpw = akpw(R.powered, sp.delta, rng, ao);

  std::vector<VertexId> all(R.powered.n);
  for (int v = 0; v < R.powered.n; ++v) all[v] = v;
  double diam = component_diameter(R.powered, R.akpw.forest_edges, all);
  double max_len = 0.0;
  for (EdgeId e : R.akpw.forest_edges)
    max_len = std::max(max_len, R.powered.edges[e].length);
  // the top level must both cover the spanning forest's diameter and
  // admit its longest edge under the d_0/log n length cap
  double d0 = std::max(diam, R.log_n * max_len);
  DiameterSequence dd = make_diameter_sequence_from(std::max(d0, 1.0));

  R.impl = decompose_two_stage(R.powered, R.akpw, dd, rng, sp);
  for (int i = 0; i < static_cast<int>(R.impl.levels.size()); ++i)
    R.impl.levels[i].scale = kGeoConstant / (R.q - p) *
                             std::pow(dd.d[i] / R.log_n, (R.q - p) / p);

  if (opt.check) {
    BartalDecomposition B = R.explicit_decomposition();
    ValidationReport rep = validate_decomposition(R.normalized, B, B.dd, R.log_n);
    if (!rep.ok) throw Error("full_pipeline: invalid decomposition: " + rep.message);
    if (!weighted_subgraph_ok(R.normalized, B))
      throw Error("full_pipeline: embeddability weight bound violated");
  }

  R.tree = expand_implicit(R.powered, R.akpw, R.impl);
  // back to the input graph's length units
  for (auto& te : R.tree.edges) {
    te.length *= lmin;
    for (PathHop& h : te.path) h.weight /= lmin;
  }
  return R;
}

}  // namespace lowstretch
