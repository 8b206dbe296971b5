#pragma once

#include <numeric>
#include <vector>

#include "lowstretch/common.hpp"

namespace lowstretch {

class UnionFind {
public:
  explicit UnionFind(int n) : parent_(n), rank_(n, 0), components_(n) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }

  int find(int x) const {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  /// Returns true when two components were actually merged.
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (rank_[a] < rank_[b]) std::swap(a, b);
    parent_[b] = a;
    if (rank_[a] == rank_[b]) ++rank_[a];
    --components_;
    return true;
  }

  bool connected(int a, int b) const { return find(a) == find(b); }
  int components() const { return components_; }
  int size() const { return static_cast<int>(parent_.size()); }

private:
  mutable std::vector<int> parent_;
  std::vector<int> rank_;
  int components_;
};

}  // namespace lowstretch
