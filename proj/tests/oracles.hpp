// Brute-force reference implementations used only by tests. Everything here
// is independent of the library's computation paths: spanning structures are
// checked by union-find, matchings by subset search, isomorphism by
// backtracking.
#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "detlim/incidence.hpp"
#include "detlim/rooted_tree.hpp"

namespace oracles {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[a] = b;
    return true;
  }
};

// All spanning trees of K_n as sorted edge-index sets, edges enumerated in
// the same (i<j) lexicographic order the ust generator uses.
inline std::vector<std::vector<int>> spanning_trees_complete(int n) {
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) edges.emplace_back(i, j);
  const int m = static_cast<int>(edges.size());
  std::vector<std::vector<int>> out;
  std::vector<int> idx(n - 1);
  for (int i = 0; i < n - 1; ++i) idx[i] = i;
  for (;;) {
    UnionFind uf(n);
    bool acyclic = true;
    for (int e : idx)
      if (!uf.unite(edges[e].first, edges[e].second)) {
        acyclic = false;
        break;
      }
    if (acyclic) out.push_back(idx);
    int i = n - 2;
    while (i >= 0 && idx[i] == m - (n - 1 - i)) --i;
    if (i < 0) break;
    ++idx[i];
    for (int j = i + 1; j < n - 1; ++j) idx[j] = idx[j - 1] + 1;
  }
  return out;
}

// Every matching of the tree saturating required_vertices, counted by DFS
// over the edge list (include / exclude each edge).
inline std::uint64_t count_matchings_brute(const detlim::RootedBipTree& t,
                                           const std::vector<int>& required) {
  std::vector<std::pair<int, int>> edges;
  for (int v = 0; v < t.size(); ++v)
    if (t.parent[v] >= 0) edges.emplace_back(t.parent[v], v);
  std::vector<char> used(t.size(), 0), need(t.size(), 0);
  for (int v : required) need[v] = 1;
  std::uint64_t count = 0;
  auto rec = [&](auto&& self, std::size_t e) -> void {
    if (e == edges.size()) {
      for (int v = 0; v < t.size(); ++v)
        if (need[v] && !used[v]) return;
      ++count;
      return;
    }
    self(self, e + 1);  // exclude
    const auto [a, b] = edges[e];
    if (!used[a] && !used[b]) {
      used[a] = used[b] = 1;
      self(self, e + 1);
      used[a] = used[b] = 0;
    }
  };
  rec(rec, 0);
  return count;
}

// Root-preserving isomorphism by backtracking over child assignments.
inline bool isomorphic_backtrack(const detlim::RootedBipTree& a, int va,
                                 const detlim::RootedBipTree& b, int vb) {
  const auto& ca = a.children[va];
  const auto& cb = b.children[vb];
  if (ca.size() != cb.size()) return false;
  std::vector<int> perm(cb.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::sort(perm.begin(), perm.end());
  do {
    bool ok = true;
    for (std::size_t i = 0; i < ca.size() && ok; ++i)
      ok = isomorphic_backtrack(a, ca[i], b, cb[perm[i]]);
    if (ok) return true;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return ca.empty();
}

inline bool isomorphic_backtrack(const detlim::RootedBipTree& a, const detlim::RootedBipTree& b) {
  if (a.size() != b.size()) return false;
  return isomorphic_backtrack(a, a.root(), b, b.root());
}

// Number of root-preserving automorphisms by brute backtracking.
inline std::uint64_t count_automorphisms_brute(const detlim::RootedBipTree& t, int va, int vb) {
  const auto& ca = t.children[va];
  const auto& cb = t.children[vb];
  if (ca.size() != cb.size()) return 0;
  if (ca.empty()) return 1;
  std::vector<int> perm(cb.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::uint64_t total = 0;
  do {
    std::uint64_t ways = 1;
    for (std::size_t i = 0; i < ca.size() && ways; ++i)
      ways *= count_automorphisms_brute(t, ca[i], cb[perm[i]]);
    total += ways;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total;
}

inline std::uint64_t count_automorphisms_brute(const detlim::RootedBipTree& t) {
  return count_automorphisms_brute(t, t.root(), t.root());
}

// All parent arrays with parent[i] < i cover every rooted tree shape on n
// vertices at least once.
inline void all_parent_arrays(int n, const std::function<void(const std::vector<int>&)>& visit) {
  std::vector<int> parent(n, -1);
  auto rec = [&](auto&& self, int i) -> void {
    if (i == n) {
      visit(parent);
      return;
    }
    for (int p = 0; p < i; ++p) {
      parent[i] = p;
      self(self, i + 1);
    }
  };
  rec(rec, 1);
}

// All rooted trees with exactly n vertices, one parent array per isomorphism
// class, generated canonically as root + nondecreasing multisets of subtree
// classes. Class counts follow 1,1,2,4,9,20,48,115,286,719,1842,4766,12486.
inline const std::vector<std::vector<std::vector<int>>>& rooted_tree_classes(int max_n) {
  static std::vector<std::vector<std::vector<int>>> table;
  if (static_cast<int>(table.size()) > max_n) return table;
  if (table.empty()) {
    table.resize(2);
    table[1] = {{-1}};
  }
  const int old = static_cast<int>(table.size());
  table.resize(max_n + 1);
  for (int s = old; s <= max_n; ++s) {
    std::vector<std::vector<int>> out;
    std::vector<std::pair<int, int>> chosen;  // (size, class index), nondecreasing
    std::function<void(int, int, int)> rec = [&](int remaining, int min_size, int min_idx) {
      if (remaining == 0) {
        std::vector<int> parents{-1};
        for (auto [sz, idx] : chosen) {
          const int base = static_cast<int>(parents.size());
          for (int p : table[sz][idx]) parents.push_back(p < 0 ? 0 : base + p);
        }
        out.push_back(std::move(parents));
        return;
      }
      for (int sz = min_size; sz <= remaining; ++sz)
        for (int idx = (sz == min_size ? min_idx : 0); idx < static_cast<int>(table[sz].size());
             ++idx) {
          chosen.emplace_back(sz, idx);
          rec(remaining - sz, sz, idx);
          chosen.pop_back();
        }
    };
    rec(s - 1, 1, 0);
    table[s] = std::move(out);
  }
  return table;
}

// 0.5 * l1 distance between two count maps normalized to probabilities.
inline double tv_between_counts(const std::map<std::string, std::uint64_t>& a, double total_a,
                                const std::map<std::string, std::uint64_t>& b, double total_b) {
  double s = 0.0;
  for (const auto& [key, na] : a) {
    const auto it = b.find(key);
    s += std::abs(na / total_a - (it == b.end() ? 0.0 : it->second / total_b));
  }
  for (const auto& [key, nb] : b)
    if (!a.count(key)) s += nb / total_b;
  return 0.5 * s;
}

}  // namespace oracles
