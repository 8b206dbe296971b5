#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <map>

#include "doctest.h"
#include "lowstretch/akpw.hpp"
#include "lowstretch/generators.hpp"
#include "lowstretch/multigraph.hpp"
#include "lowstretch/union_find.hpp"

using namespace lowstretch;

namespace {
void check_invariants(const MultiGraph& g, const AKPWDecomposition& A) {
  // spanning forest
  UnionFind uf(g.n);
  for (EdgeId e : A.forest_edges) uf.unite(g.edges[e].u, g.edges[e].v);
  CHECK(uf.components() == 1);
  CHECK((int)A.forest_edges.size() == g.n - 1);
  // join levels nondecreasing in stored order within a round, and an edge
  // never joins before its bucket becomes eligible
  for (size_t i = 0; i < A.forest_edges.size(); ++i)
    CHECK(A.join_level[i] >= A.bucket_of[A.forest_edges[i]]);
  // components after round i have diameter <= delta^{i+2} in true lengths
  // (singletons before round 0; each round stitches clusters by a
  // hop-diameter <= delta/3 certificate of edges shorter than delta^{i+1})
  for (int lvl = 0; lvl < A.rounds; ++lvl) {
    UnionFind lv(g.n);
    std::vector<EdgeId> in;
    for (size_t i = 0; i < A.forest_edges.size(); ++i)
      if (A.join_level[i] <= lvl) {
        in.push_back(A.forest_edges[i]);
        lv.unite(g.edges[A.forest_edges[i]].u, g.edges[A.forest_edges[i]].v);
      }
    std::map<int, std::vector<VertexId>> comps;
    for (VertexId v = 0; v < g.n; ++v) comps[lv.find(v)].push_back(v);
    for (auto& [root, vs] : comps) {
      std::vector<EdgeId> mine;
      for (EdgeId e : in)
        if (lv.find(g.edges[e].u) == root) mine.push_back(e);
      CHECK(component_diameter(g, mine, vs) <=
            std::pow(A.delta, lvl + 2) * (1 + 1e-9));
    }
  }
}
}  // namespace

TEST_CASE("star is clustered within the first rounds") {
  MultiGraph g;
  g.n = 9;
  for (int leaf = 1; leaf <= 8; ++leaf) g.add_edge(0, leaf, 1.0);
  Rng rng(4);
  AKPWDecomposition A = akpw(g, 16.0, rng);
  check_invariants(g, A);
  for (EdgeId e = 0; e < g.m(); ++e) CHECK(A.bucket_of[e] == 0);
  // adjacent leaves connect through the hub as soon as both edges join
  CHECK(A.connect_level(1, 2) >= 0);
  CHECK(A.connect_level(1, 2) < A.rounds);
  CHECK(A.connect_level(3, 3) == 0);
}

TEST_CASE("bucketed path joins no earlier than the bucket round") {
  const double delta = 8.0;
  MultiGraph g;
  g.n = 4;
  g.add_edge(0, 1, 1.0);
  g.add_edge(1, 2, delta);
  g.add_edge(2, 3, delta * delta);
  Rng rng(6);
  AKPWDecomposition A = akpw(g, delta, rng);
  check_invariants(g, A);
  CHECK(A.bucket_of[0] == 0);
  CHECK(A.bucket_of[1] == 1);
  CHECK(A.bucket_of[2] == 2);
  for (size_t i = 0; i < A.forest_edges.size(); ++i)
    CHECK(A.join_level[i] >= A.bucket_of[A.forest_edges[i]]);
}

TEST_CASE("delta floor is enforced") {
  MultiGraph g = gen_path(4);
  Rng rng(1);
  CHECK_THROWS(akpw(g, 4.0, rng));  // unit quotient edges can never be captured
}

TEST_CASE("connect_level agrees with brute-force per-level components") {
  for (unsigned long long seed = 1; seed <= 8; ++seed) {
    Rng rng(seed);
    MultiGraph g = gen_er(30, 70, 20.0, rng);
    AkpwOptions opt;
    opt.warn_small_delta = false;
    AKPWDecomposition A = akpw(g, 9.0, rng, opt);
    check_invariants(g, A);
    // recompute components level by level
    UnionFind uf(g.n);
    std::vector<std::vector<int>> comp_at(A.rounds, std::vector<int>(g.n));
    for (int lvl = 0; lvl < A.rounds; ++lvl) {
      for (size_t i = 0; i < A.forest_edges.size(); ++i)
        if (A.join_level[i] == lvl)
          uf.unite(g.edges[A.forest_edges[i]].u, g.edges[A.forest_edges[i]].v);
      for (VertexId v = 0; v < g.n; ++v) comp_at[lvl][v] = uf.find(v);
    }
    for (VertexId u = 0; u < g.n; ++u)
      for (VertexId v = u + 1; v < g.n; ++v) {
        int want = LinkForest::kNever;
        for (int lvl = 0; lvl < A.rounds; ++lvl)
          if (comp_at[lvl][u] == comp_at[lvl][v]) { want = lvl; break; }
        if (want == LinkForest::kNever) want = A.rounds - 1;  // spanning at the end
        CHECK(A.connect_level(u, v) == want);
      }
  }
}

TEST_CASE("monotone refinement across levels") {
  Rng rng(12);
  MultiGraph g = gen_grid(8, 8);
  AkpwOptions opt;
  opt.warn_small_delta = false;
  AKPWDecomposition A = akpw(g, 10.0, rng, opt);
  check_invariants(g, A);
  // every edge's connect level is consistent with cut()
  for (EdgeId e = 0; e < g.m(); ++e) {
    int cl = A.edge_connect_level[e];
    CHECK(cl == A.connect_level(g.edges[e].u, g.edges[e].v));
    CHECK(A.cut(e) == (cl > A.bucket_of[e] + 1));
  }
}

TEST_CASE("deterministic given the seed") {
  MultiGraph g = gen_grid(6, 6);
  Rng r1(33), r2(33);
  AkpwOptions opt;
  opt.warn_small_delta = false;
  AKPWDecomposition a = akpw(g, 12.0, r1, opt), b = akpw(g, 12.0, r2, opt);
  CHECK(a.forest_edges == b.forest_edges);
  CHECK(a.join_level == b.join_level);
}
