#pragma once

#include <algorithm>
#include <iomanip>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <vector>

#include "lowstretch/akpw.hpp"
#include "lowstretch/bartal.hpp"
#include "lowstretch/common.hpp"
#include "lowstretch/contraction.hpp"
#include "lowstretch/multigraph.hpp"
#include "lowstretch/two_stage.hpp"
#include "lowstretch/union_find.hpp"

namespace lowstretch {

/// Tree over the original vertices plus helper vertices, with the
/// certificate paths that embed each tree edge into the graph.
struct SteinerTree {
  int n_original = 0;
  int n_total = 0;
  struct TEdge {
    int u, v;
    double length;
    std::vector<PathHop> path;  // walk from u to v in graph edges
  };
  std::vector<TEdge> edges;
  std::vector<int> pi;  // original vertex -> tree vertex (identity here)
};

namespace detail {

/// Appends a contracted component skeleton to the tree, mapping terminal
/// labels through as-is and branch nodes to fresh ids.
inline void append_contraction(SteinerTree& T, const ContractedTree& ct) {
  std::vector<int> node_id(ct.nodes());
  for (int j = 0; j < ct.nodes(); ++j)
    node_id[j] = ct.label[j] >= 0 ? ct.label[j] : T.n_total++;
  for (const auto& ce : ct.edges)
    T.edges.push_back({node_id[ce.a], node_id[ce.b], ce.length, ce.path});
}

}  // namespace detail

struct BuildOptions {
  double log_n = 0.0;
  bool check = true;  // re-validate the decomposition before building
};

/// Stitches a Steiner tree out of an explicit decomposition: for every
/// component of level i, the centers (smallest original ids) of its
/// level-(i+1) children are joined by contracting that component's
/// level-i forest. Helper vertex ids are allocated n, n+1, ... in level
/// order. Edge payloads carry per-level weights 1/level-length.
inline SteinerTree build_tree(const MultiGraph& g, const BartalDecomposition& B,
                              BuildOptions opt = {}) {
  if (opt.check) {
    ValidationReport rep = validate_decomposition(g, B, B.dd, opt.log_n);
    if (!rep.ok) throw Error("build_tree: invalid decomposition: " + rep.message);
    if (!weighted_subgraph_ok(g, B))
      throw Error("build_tree: decomposition is not an embeddable weighted subgraph");
  }
  SteinerTree T;
  T.n_original = g.n;
  T.n_total = g.n;
  T.pi.resize(g.n);
  for (int v = 0; v < g.n; ++v) T.pi[v] = v;

  const int t = B.t();
  // component labels and per-component minimum vertex per level
  std::vector<std::vector<int>> comp(t + 1, std::vector<int>(g.n));
  std::vector<std::vector<VertexId>> cmin(t + 1, std::vector<VertexId>(g.n));
  for (int i = 0; i <= t; ++i) {
    UnionFind uf(g.n);
    for (const LevelEdge& le : B.levels[i]) uf.unite(g.edges[le.e].u, g.edges[le.e].v);
    std::vector<VertexId> mn(g.n, -1);
    for (VertexId v = 0; v < g.n; ++v) {
      int r = uf.find(v);
      if (mn[r] < 0) mn[r] = v;  // ids ascend, first hit is the minimum
    }
    for (VertexId v = 0; v < g.n; ++v) {
      comp[i][v] = uf.find(v);
      cmin[i][v] = mn[uf.find(v)];
    }
  }

  for (int i = 0; i < t; ++i) {
    // terminal sets: centers of level-(i+1) components, grouped by the
    // level-i component containing them
    std::map<int, std::vector<VertexId>> terms;
    std::vector<char> seen(g.n, 0);
    for (VertexId v = 0; v < g.n; ++v) {
      VertexId c = cmin[i + 1][v];
      if (seen[c]) continue;
      seen[c] = 1;
      terms[comp[i][c]].push_back(c);
    }
    std::map<int, std::vector<WorkEdge>> wedges;
    for (const LevelEdge& le : B.levels[i]) {
      const Edge& e = g.edges[le.e];
      wedges[comp[i][e.u]].push_back(
          {e.u, e.v, le.length, {{le.e, 1.0 / le.length}}});
    }
    for (auto& [root, S] : terms) {
      if (S.size() < 2) continue;
      detail::append_contraction(T, contract_tree(wedges[root], S));
    }
  }
  return T;
}

/// Builds the same tree straight from the implicit decomposition: per
/// level, cluster subtrees are contracted to their attachment vertices
/// (explicit-edge endpoints plus child centers) in one lowest-common-
/// ancestor batch over the cluster forest, and the skeletons are stitched
/// together with the explicit edges. Per-level forests are never
/// materialized.
inline SteinerTree expand_implicit(const MultiGraph& g, const AKPWDecomposition& A,
                                   const ImplicitDecomposition& I) {
  if (static_cast<int>(A.bucket_of.size()) != g.m() ||
      static_cast<int>(I.first_cut.size()) != g.m())
    throw Error("expand_implicit: decomposition does not match the graph");
  const int t = I.t();
  RootedForest F = root_forest(g, A.forest_edges);

  // per-level piece labels and piece minima on original vertices
  std::vector<std::vector<int>> piece(t + 1, std::vector<int>(g.n));
  std::vector<std::vector<VertexId>> pmin(t + 1, std::vector<VertexId>(g.n));
  std::vector<std::vector<int>> cluster(t + 1, std::vector<int>(g.n));
  for (int i = 0; i <= t; ++i) {
    UnionFind uf = scoped_clusters(g, A, I.levels[i].scope);
    std::vector<int> piece_of_root(g.n, -1);
    for (auto [r, p] : I.levels[i].cluster_piece) piece_of_root[r] = p;
    std::vector<VertexId> mn(I.levels[i].n_pieces > 0 ? I.levels[i].n_pieces : g.n, -1);
    for (VertexId v = 0; v < g.n; ++v) {
      cluster[i][v] = uf.find(v);
      int p = piece_of_root[uf.find(v)];
      if (p < 0) throw Error("expand_implicit: missing piece label");
      piece[i][v] = p;
      if (mn[p] < 0) mn[p] = v;
      pmin[i][v] = -1;  // filled below
    }
    for (VertexId v = 0; v < g.n; ++v) pmin[i][v] = mn[piece[i][v]];
  }

  // gather per-(level, cluster) attachment sets
  struct SetRef {
    int level;
    int cluster_root;
  };
  std::map<std::pair<int, int>, int> set_index;
  std::vector<std::vector<VertexId>> sets;
  std::vector<SetRef> set_refs;
  auto touch = [&](int lvl, VertexId v) {
    int cl = cluster[lvl][v];
    auto [it, fresh] = set_index.insert({{lvl, cl}, static_cast<int>(sets.size())});
    if (fresh) {
      sets.push_back({});
      set_refs.push_back({lvl, cl});
    }
    sets[it->second].push_back(v);
  };
  for (int i = 0; i < t; ++i) {
    std::vector<char> seen(g.n, 0);
    for (VertexId v = 0; v < g.n; ++v) {
      VertexId c = pmin[i + 1][v];
      if (!seen[c]) {
        seen[c] = 1;
        touch(i, c);
      }
    }
    for (const LevelEdge& le : I.levels[i].explicit_edges) {
      touch(i, g.edges[le.e].u);
      touch(i, g.edges[le.e].v);
    }
  }
  std::vector<ContractedTree> skeletons = offline_lca_contract(F, sets);

  SteinerTree T;
  T.n_original = g.n;
  T.n_total = g.n;
  T.pi.resize(g.n);
  for (int v = 0; v < g.n; ++v) T.pi[v] = v;

  for (int i = 0; i < t; ++i) {
    const double scale = I.levels[i].scale;
    // child centers per level-i piece
    std::map<int, std::vector<VertexId>> terms;
    std::vector<char> seen(g.n, 0);
    for (VertexId v = 0; v < g.n; ++v) {
      VertexId c = pmin[i + 1][v];
      if (seen[c]) continue;
      seen[c] = 1;
      terms[piece[i][c]].push_back(c);
    }
    std::map<int, std::vector<WorkEdge>> wedges;
    int temp_id = g.n;  // placeholder ids for cluster branch vertices
    std::map<std::pair<int, int>, std::vector<int>> skel_ids;  // per set: node labels
    auto cluster_edges = [&](VertexId v) {
      auto it = set_index.find({i, cluster[i][v]});
      if (it == set_index.end()) return;
      auto key = std::make_pair(i, cluster[i][v]);
      if (skel_ids.count(key)) return;  // already merged into its piece
      const ContractedTree& ct = skeletons[it->second];
      std::vector<int>& ids = skel_ids[key];
      ids.resize(ct.nodes());
      for (int j = 0; j < ct.nodes(); ++j)
        ids[j] = ct.label[j] >= 0 ? ct.label[j] : temp_id++;
      int p = piece[i][v];
      for (const auto& ce : ct.edges) {
        std::vector<PathHop> hops = ce.path;
        for (PathHop& h : hops) h.weight /= scale;
        wedges[p].push_back({ids[ce.a], ids[ce.b], ce.length * scale, std::move(hops)});
      }
    };
    for (auto& [p, S] : terms)
      for (VertexId c : S) cluster_edges(c);
    for (const LevelEdge& le : I.levels[i].explicit_edges) {
      const Edge& e = g.edges[le.e];
      cluster_edges(e.u);
      cluster_edges(e.v);
      wedges[piece[i][e.u]].push_back(
          {e.u, e.v, le.length * scale, {{le.e, 1.0 / (le.length * scale)}}});
    }
    for (auto& [p, S] : terms) {
      if (S.size() < 2) continue;
      detail::append_contraction(T, contract_tree(wedges[p], S));
    }
  }
  return T;
}

// --- tree text format ------------------------------------------------------
// header: "n_total n_original"; then edge lines "u v length"; then
// "map orig tree" lines; optionally "cert <edge_index> e:w e:w ..." lines.

inline void write_tree(std::ostream& out, const SteinerTree& T,
                       bool with_certificate = true,
                       const std::string& header_comment = "") {
  std::ostringstream os;
  os << std::setprecision(17);
  if (!header_comment.empty()) os << "# " << header_comment << "\n";
  os << T.n_total << " " << T.n_original << "\n";
  for (const auto& e : T.edges) os << e.u << " " << e.v << " " << e.length << "\n";
  for (int v = 0; v < T.n_original; ++v) os << "map " << v << " " << T.pi[v] << "\n";
  if (with_certificate) {
    for (size_t j = 0; j < T.edges.size(); ++j) {
      os << "cert " << j;
      for (const PathHop& h : T.edges[j].path) os << " " << h.e << ":" << h.weight;
      os << "\n";
    }
  }
  out << os.str();
}

inline SteinerTree read_tree(std::istream& in) {
  SteinerTree T;
  std::string line;
  bool have_header = false;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok)) continue;
    if (!have_header) {
      std::istringstream hs(line);
      if (!(hs >> T.n_total >> T.n_original)) throw Error("bad tree header: " + line);
      T.pi.assign(T.n_original, -1);
      have_header = true;
      continue;
    }
    if (tok == "map") {
      int orig, tv;
      if (!(ls >> orig >> tv)) throw Error("bad map line: " + line);
      T.pi.at(orig) = tv;
    } else if (tok == "cert") {
      size_t j;
      if (!(ls >> j) || j >= T.edges.size()) throw Error("bad cert line: " + line);
      std::string hop;
      while (ls >> hop) {
        auto colon = hop.find(':');
        if (colon == std::string::npos) throw Error("bad cert hop: " + hop);
        T.edges[j].path.push_back(
            {std::stoi(hop.substr(0, colon)), std::stod(hop.substr(colon + 1))});
      }
    } else {
      SteinerTree::TEdge e;
      std::istringstream es(line);
      if (!(es >> e.u >> e.v >> e.length)) throw Error("bad tree edge line: " + line);
      T.edges.push_back(std::move(e));
    }
  }
  if (!have_header) throw Error("empty tree file");
  for (int v = 0; v < T.n_original; ++v)
    if (T.pi[v] < 0) throw Error("tree file is missing map entries");
  return T;
}

}  // namespace lowstretch
