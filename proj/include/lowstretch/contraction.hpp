#pragma once

#include <algorithm>
#include <map>
#include <vector>

#include "lowstretch/common.hpp"
#include "lowstretch/multigraph.hpp"
#include "lowstretch/union_find.hpp"

namespace lowstretch {

/// One step of a certificate path: a graph edge and the weight allocated
/// to it (reciprocal of the length the path charges for the hop).
struct PathHop {
  EdgeId e;
  double weight;
};

/// Tree with distinguished (labeled) vertices; label -1 marks internal
/// branch vertices introduced by contraction.
struct ContractedTree {
  std::vector<VertexId> label;
  struct CEdge {
    int a, b;  // node indices
    double length;
    std::vector<PathHop> path;  // ordered walk from node a to node b
  };
  std::vector<CEdge> edges;

  int nodes() const { return static_cast<int>(label.size()); }
};

/// Input edge for contraction: endpoints are external vertex ids and the
/// payload is the certificate fragment the edge stands for.
struct WorkEdge {
  VertexId a, b;
  double length;
  std::vector<PathHop> path;  // ordered from a to b
};

/// Contracts a tree to the terminal set S: removes degree-1 vertices not
/// in S and splices degree-2 vertices not in S, concatenating payloads.
/// Distances between terminals are preserved exactly. The result has at
/// most 2|S| - 1 vertices. Rooting at the smallest terminal id makes the
/// output and all float sums canonical.
inline ContractedTree contract_tree(const std::vector<WorkEdge>& tree,
                                    std::vector<VertexId> S) {
  if (S.empty()) throw Error("contract_tree: terminal set is empty");
  std::sort(S.begin(), S.end());
  S.erase(std::unique(S.begin(), S.end()), S.end());

  // local vertex indexing
  std::map<VertexId, int> idx;
  auto local = [&](VertexId v) {
    auto [it, fresh] = idx.insert({v, static_cast<int>(idx.size())});
    (void)fresh;
    return it->second;
  };
  for (const WorkEdge& we : tree) {
    local(we.a);
    local(we.b);
  }
  for (VertexId s : S) local(s);
  const int n = static_cast<int>(idx.size());
  std::vector<VertexId> rev(n);
  for (auto [v, i] : idx) rev[i] = v;

  std::vector<std::vector<std::pair<int, int>>> adj(n);  // (neighbor, edge idx)
  for (int j = 0; j < static_cast<int>(tree.size()); ++j) {
    int a = idx.at(tree[j].a), b = idx.at(tree[j].b);
    adj[a].push_back({b, j});
    adj[b].push_back({a, j});
  }
  for (auto& lst : adj)
    std::sort(lst.begin(), lst.end(), [&](auto x, auto y) { return rev[x.first] < rev[y.first]; });

  std::vector<char> terminal(n, 0);
  for (VertexId s : S) terminal[idx.at(s)] = 1;

  const int root = idx.at(S.front());
  std::vector<int> parent(n, -2), parent_edge(n, -1), order;
  order.reserve(n);
  parent[root] = -1;
  std::vector<int> stack{root};
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    order.push_back(v);
    for (auto [w, j] : adj[v]) {
      if (parent[w] != -2) continue;
      parent[w] = v;
      parent_edge[w] = j;
      stack.push_back(w);
    }
  }

  std::vector<int> cnt(n, 0);
  for (int i = static_cast<int>(order.size()) - 1; i >= 0; --i) {
    int v = order[i];
    cnt[v] += terminal[v];
    if (parent[v] >= 0) cnt[parent[v]] += cnt[v];
  }
  if (cnt[root] != static_cast<int>(S.size()))
    throw Error("contract_tree: terminal set spans multiple components");

  std::vector<int> live_children(n, 0);
  for (int v : order)
    if (parent[v] >= 0 && cnt[v] > 0) ++live_children[parent[v]];
  std::vector<char> keep(n, 0);
  for (int v : order) keep[v] = terminal[v] || live_children[v] >= 2;
  keep[root] = 1;

  ContractedTree out;
  std::vector<int> out_id(n, -1);
  for (int v : order) {
    if (!keep[v] || cnt[v] == 0) continue;
    out_id[v] = out.nodes();
    out.label.push_back(terminal[v] ? rev[v] : -1);
  }
  for (int v : order) {
    if (out_id[v] < 0 || v == root) continue;
    // climb to the nearest kept ancestor, then emit the path top-down
    std::vector<int> chain;  // tree edge indices, from v upward
    int u = v;
    while (true) {
      chain.push_back(parent_edge[u]);
      u = parent[u];
      if (out_id[u] >= 0) break;
    }
    std::reverse(chain.begin(), chain.end());
    ContractedTree::CEdge ce;
    ce.a = out_id[u];
    ce.b = out_id[v];
    ce.length = 0.0;
    int at = u;  // walk downward from the anchor
    for (int j : chain) {
      ce.length += tree[j].length;
      bool forward = idx.at(tree[j].a) == at;
      if (forward) {
        ce.path.insert(ce.path.end(), tree[j].path.begin(), tree[j].path.end());
        at = idx.at(tree[j].b);
      } else {
        ce.path.insert(ce.path.end(), tree[j].path.rbegin(), tree[j].path.rend());
        at = idx.at(tree[j].a);
      }
    }
    out.edges.push_back(std::move(ce));
  }
  return out;
}

/// Rooted representation of a forest given by graph edge ids: parents,
/// preorder, subtree sizes. Component roots are the smallest vertex ids;
/// children are visited in ascending id order, so the layout is canonical.
struct RootedForest {
  int n = 0;
  std::vector<VertexId> parent;
  std::vector<EdgeId> parent_edge;   // graph edge to parent
  std::vector<double> parent_len;
  std::vector<int> pre;              // preorder index
  std::vector<int> order;            // vertices in preorder
  std::vector<int> subtree;          // subtree size
  std::vector<VertexId> comp_root;

  bool is_ancestor(VertexId a, VertexId v) const {
    return pre[a] <= pre[v] && pre[v] < pre[a] + subtree[a];
  }
};

inline RootedForest root_forest(const MultiGraph& g,
                                const std::vector<EdgeId>& forest_edges) {
  RootedForest f;
  f.n = g.n;
  f.parent.assign(g.n, -1);
  f.parent_edge.assign(g.n, -1);
  f.parent_len.assign(g.n, 0.0);
  f.pre.assign(g.n, -1);
  f.subtree.assign(g.n, 1);
  f.comp_root.assign(g.n, -1);
  std::vector<std::vector<std::pair<VertexId, EdgeId>>> adj(g.n);
  for (EdgeId e : forest_edges) {
    adj[g.edges[e].u].push_back({g.edges[e].v, e});
    adj[g.edges[e].v].push_back({g.edges[e].u, e});
  }
  for (auto& lst : adj) std::sort(lst.begin(), lst.end());
  f.order.reserve(g.n);
  for (VertexId r = 0; r < g.n; ++r) {
    if (f.pre[r] >= 0) continue;
    // iterative preorder DFS; children pushed in reverse keeps ascending order
    std::vector<VertexId> stack{r};
    f.comp_root[r] = r;
    while (!stack.empty()) {
      VertexId v = stack.back();
      stack.pop_back();
      if (f.pre[v] >= 0) continue;
      f.pre[v] = static_cast<int>(f.order.size());
      f.order.push_back(v);
      f.comp_root[v] = r;
      for (auto it = adj[v].rbegin(); it != adj[v].rend(); ++it) {
        auto [w, e] = *it;
        if (f.pre[w] >= 0 || w == f.parent[v]) continue;
        f.parent[w] = v;
        f.parent_edge[w] = e;
        f.parent_len[w] = g.edges[e].length;
        stack.push_back(w);
      }
    }
  }
  for (int i = g.n - 1; i >= 0; --i) {
    VertexId v = f.order[i];
    if (f.parent[v] >= 0) f.subtree[f.parent[v]] += f.subtree[v];
  }
  return f;
}

namespace detail {

/// Tarjan's offline lowest-common-ancestor pass: answers all queries with
/// one DFS over the forest and a union-find.
inline std::vector<VertexId> offline_lca(const RootedForest& f,
                                         const std::vector<std::pair<VertexId, VertexId>>& queries) {
  std::vector<std::vector<std::pair<VertexId, int>>> at(f.n);  // (other endpoint, query idx)
  for (int qi = 0; qi < static_cast<int>(queries.size()); ++qi) {
    auto [a, b] = queries[qi];
    at[a].push_back({b, qi});
    at[b].push_back({a, qi});
  }
  std::vector<VertexId> answer(queries.size(), -1);
  UnionFind uf(f.n);
  std::vector<VertexId> anc(f.n);
  std::vector<char> done(f.n, 0);
  // process vertices in reverse preorder: children before parents
  for (int i = f.n - 1; i >= 0; --i) {
    VertexId v = f.order[i];
    for (auto [w, qi] : at[v])
      if (done[w] && f.comp_root[w] == f.comp_root[v])
        answer[qi] = anc[uf.find(w)];
    done[v] = 1;
    anc[uf.find(v)] = v;
    if (f.parent[v] >= 0) {
      uf.unite(v, f.parent[v]);
      anc[uf.find(v)] = f.parent[v];
    }
  }
  return answer;
}

}  // namespace detail

/// Contracts the rooted forest to each terminal set in one batch: a
/// preorder sort per set, offline LCA on adjacent pairs, then a stack
/// sweep builds each virtual tree from the closure set Gamma(S); added
/// ancestors of degree two are spliced away afterwards. Output matches
/// contract_tree run on the underlying component up to node renaming.
inline std::vector<ContractedTree> offline_lca_contract(
    const RootedForest& f, const std::vector<std::vector<VertexId>>& sets) {
  // gather adjacent-pair queries across all sets
  std::vector<std::vector<VertexId>> sorted(sets.size());
  std::vector<std::pair<VertexId, VertexId>> queries;
  std::vector<std::pair<int, int>> qrange(sets.size());
  for (size_t si = 0; si < sets.size(); ++si) {
    sorted[si] = sets[si];
    auto& s = sorted[si];
    if (s.empty()) throw Error("offline_lca_contract: empty terminal set");
    std::sort(s.begin(), s.end(),
              [&](VertexId a, VertexId b) { return f.pre[a] < f.pre[b]; });
    s.erase(std::unique(s.begin(), s.end()), s.end());
    int q0 = static_cast<int>(queries.size());
    for (size_t j = 0; j + 1 < s.size(); ++j) queries.push_back({s[j], s[j + 1]});
    qrange[si] = {q0, static_cast<int>(queries.size())};
    for (size_t j = 0; j + 1 < s.size(); ++j)
      if (f.comp_root[s[j]] != f.comp_root[s[j + 1]])
        throw Error("offline_lca_contract: set " + std::to_string(si) +
                    " spans multiple components");
  }
  std::vector<VertexId> lca = detail::offline_lca(f, queries);

  std::vector<ContractedTree> out(sets.size());
  for (size_t si = 0; si < sets.size(); ++si) {
    const auto& s = sorted[si];
    // Gamma = S plus adjacent-pair ancestors, preorder-sorted
    std::vector<VertexId> gamma = s;
    for (int qi = qrange[si].first; qi < qrange[si].second; ++qi)
      gamma.push_back(lca[qi]);
    std::sort(gamma.begin(), gamma.end(),
              [&](VertexId a, VertexId b) { return f.pre[a] < f.pre[b]; });
    gamma.erase(std::unique(gamma.begin(), gamma.end()), gamma.end());

    // virtual tree via ancestor stack
    std::vector<VertexId> vparent(gamma.size(), -1);
    std::map<VertexId, int> gidx;
    for (size_t j = 0; j < gamma.size(); ++j) gidx[gamma[j]] = static_cast<int>(j);
    std::vector<int> stk;
    for (size_t j = 0; j < gamma.size(); ++j) {
      while (!stk.empty() && !f.is_ancestor(gamma[stk.back()], gamma[j])) stk.pop_back();
      if (!stk.empty()) vparent[j] = stk.back();
      stk.push_back(static_cast<int>(j));
    }

    // splice non-terminal degree-2 nodes: child count 1 and has a parent
    std::vector<char> term(gamma.size(), 0);
    for (VertexId v : s) term[gidx[v]] = 1;
    std::vector<int> child_count(gamma.size(), 0);
    for (size_t j = 0; j < gamma.size(); ++j)
      if (vparent[j] >= 0) ++child_count[vparent[j]];
    std::vector<char> keep(gamma.size(), 0);
    for (size_t j = 0; j < gamma.size(); ++j)
      keep[j] = term[j] || child_count[j] >= 2 || vparent[j] < 0;

    ContractedTree& ct = out[si];
    std::vector<int> node_of(gamma.size(), -1);
    for (size_t j = 0; j < gamma.size(); ++j) {
      if (!keep[j]) continue;
      node_of[j] = ct.nodes();
      ct.label.push_back(term[j] ? gamma[j] : -1);
    }
    for (size_t j = 0; j < gamma.size(); ++j) {
      if (node_of[j] < 0) continue;
      int up = vparent[j];
      while (up >= 0 && !keep[up]) up = vparent[up];
      if (up < 0) continue;
      // materialize the forest path from gamma[up] down to gamma[j]
      ContractedTree::CEdge ce;
      ce.a = node_of[up];
      ce.b = node_of[j];
      std::vector<PathHop> rev_hops;
      for (VertexId v = gamma[j]; v != gamma[up]; v = f.parent[v])
        rev_hops.push_back({f.parent_edge[v], 1.0 / f.parent_len[v]});
      ce.path.assign(rev_hops.rbegin(), rev_hops.rend());
      // canonical top-down length sum, matching contract_tree
      ce.length = 0.0;
      for (const PathHop& h : ce.path) ce.length += 1.0 / h.weight;
      out[si].edges.push_back(std::move(ce));
    }

    // the virtual-tree root is the only possible non-terminal of degree
    // two (every other kept non-terminal has two children plus a parent);
    // splice it so the output matches a plain contraction
    std::vector<int> deg(ct.nodes(), 0);
    for (const auto& ce : ct.edges) {
      ++deg[ce.a];
      ++deg[ce.b];
    }
    for (int r = 0; r < ct.nodes(); ++r) {
      if (ct.label[r] >= 0 || deg[r] != 2) continue;
      int e1 = -1, e2 = -1;
      for (int j = 0; j < static_cast<int>(ct.edges.size()); ++j)
        if (ct.edges[j].a == r || ct.edges[j].b == r) (e1 < 0 ? e1 : e2) = j;
      auto& f1 = ct.edges[e1];
      auto& f2 = ct.edges[e2];
      ContractedTree::CEdge merged;
      merged.a = f1.a == r ? f1.b : f1.a;
      merged.b = f2.a == r ? f2.b : f2.a;
      // walk merged.a -> r -> merged.b
      if (f1.a == r)
        merged.path.assign(f1.path.rbegin(), f1.path.rend());
      else
        merged.path = f1.path;
      if (f2.a == r)
        merged.path.insert(merged.path.end(), f2.path.begin(), f2.path.end());
      else
        merged.path.insert(merged.path.end(), f2.path.rbegin(), f2.path.rend());
      merged.length = 0.0;
      for (const PathHop& h : merged.path) merged.length += 1.0 / h.weight;
      std::vector<ContractedTree::CEdge> kept_edges;
      for (int j = 0; j < static_cast<int>(ct.edges.size()); ++j)
        if (j != e1 && j != e2) kept_edges.push_back(std::move(ct.edges[j]));
      kept_edges.push_back(std::move(merged));
      ct.edges = std::move(kept_edges);
      ct.label.erase(ct.label.begin() + r);
      for (auto& ce : ct.edges) {
        if (ce.a > r) --ce.a;
        if (ce.b > r) --ce.b;
      }
      break;
    }
  }
  return out;
}

}  // namespace lowstretch
