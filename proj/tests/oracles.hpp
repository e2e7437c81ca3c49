// Reference implementations used only by tests. They avoid the library's
// reduction, neighbor tables and tree builders so agreement is meaningful.

#pragma once

#include <cstdint>
#include <cstdlib>
#include <map>
#include <queue>
#include <random>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

namespace oracle {

struct Z {
  std::int64_t x = 0;
  std::int64_t y = 0;
  friend bool operator==(const Z&, const Z&) = default;
  friend auto operator<=>(const Z&, const Z&) = default;
};

inline Z add(Z a, Z b) { return {a.x + b.x, a.y + b.y}; }
inline Z sub(Z a, Z b) { return {a.x - b.x, a.y - b.y}; }

/// alpha_k divides z  <=>  z * conj(alpha) has both parts divisible by N(alpha).
inline bool divisible(Z z, std::int64_t k) {
  const std::int64_t a = k, b = k + 1, n = a * a + b * b;
  const std::int64_t re = z.x * a + z.y * b;
  const std::int64_t im = z.y * a - z.x * b;
  return re % n == 0 && im % n == 0;
}

inline std::vector<Z> diamond(std::int64_t k) {
  std::vector<Z> out;
  for (std::int64_t x = -k; x <= k; ++x)
    for (std::int64_t y = -k; y <= k; ++y)
      if (std::llabs(x) + std::llabs(y) <= k) out.push_back({x, y});
  return out;
}

/// Exhaustive search for the diamond representative congruent to z.
inline Z brute_reduce(Z z, std::int64_t k) {
  Z found{};
  int hits = 0;
  for (Z w : diamond(k))
    if (divisible(sub(z, w), k)) {
      found = w;
      ++hits;
    }
  if (hits != 1) throw std::logic_error("brute_reduce: residue not unique");
  return found;
}

inline const std::vector<Z>& units() {
  static const std::vector<Z> u = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  return u;
}

/// Adjacency from the definition: u ~ v iff u - v - unit is divisible by alpha.
inline std::map<Z, std::set<Z>> brute_adjacency(std::int64_t k) {
  std::map<Z, std::set<Z>> adj;
  const auto nodes = diamond(k);
  for (Z u : nodes)
    for (Z v : nodes)
      for (Z e : units())
        if (divisible(sub(sub(v, u), e), k)) adj[u].insert(v);
  return adj;
}

inline std::map<Z, int> bfs(const std::map<Z, std::set<Z>>& adj, Z source, const std::set<Z>& blocked = {}) {
  std::map<Z, int> dist{{source, 0}};
  std::queue<Z> q;
  q.push(source);
  while (!q.empty()) {
    const Z u = q.front();
    q.pop();
    for (Z v : adj.at(u)) {
      if (blocked.count(v) || dist.count(v)) continue;
      dist[v] = dist[u] + 1;
      q.push(v);
    }
  }
  return dist;
}

/// Tree-1 root paths written out row by row, walked with brute_reduce.
inline std::vector<Z> table_one_path(Z v, std::int64_t k) {
  const std::int64_t c = v.x, d = v.y;
  std::vector<std::pair<Z, std::int64_t>> word;
  const Z E{1, 0}, N{0, 1}, S{0, -1};
  if (1 <= c && c <= k - 1 && 1 <= d && d <= k - c) word = {{E, c}, {N, d}};
  else if (c == 0 && d == k) word = {{E, k + 1}};
  else if (c == 0 && 1 <= d && d <= k - 1) word = {{E, k}, {S, k - d}, {E, 1}};
  else if (-k <= c && c <= -1 && 0 <= d && d <= k + c) word = {{E, k + c + 1}, {S, k - d}};
  else if (-k + 1 <= c && c <= 0 && -k - c <= d && d <= -1) word = {{E, k + c}, {N, k + d + 1}};
  else if (1 <= c && c <= k && -k + c <= d && d <= 0) word = {{E, c}, {S, -d}};
  else throw std::logic_error("table_one_path: uncovered node");
  std::vector<Z> path{{0, 0}};
  for (const auto& [dir, n] : word)
    for (std::int64_t i = 0; i < n; ++i) path.push_back(brute_reduce(add(path.back(), dir), k));
  return path;
}

inline Z rot(Z z, int t) {
  t = ((t % 4) + 4) % 4;
  for (int i = 0; i < t; ++i) z = {-z.y, z.x};
  return z;
}

/// Parent map of tree j: the tree-1 paths rotated by rho^(j-1).
inline std::map<Z, Z> tree_parents(std::int64_t k, int j) {
  std::map<Z, Z> parent;
  for (Z v : diamond(k)) {
    if (v == Z{}) continue;
    const auto p = table_one_path(v, k);
    parent[rot(v, j - 1)] = rot(p[p.size() - 2], j - 1);
  }
  return parent;
}

inline std::vector<Z> parent_path(const std::map<Z, Z>& parent, Z v) {
  std::vector<Z> path{v};
  while (!(path.back() == Z{})) path.push_back(parent.at(path.back()));
  return {path.rbegin(), path.rend()};
}

/// Latest round any live node joins a fault-free tree path, plus one.
inline int tree_traced_steps(std::int64_t k, const std::set<Z>& faults) {
  if (k == 1) return 2;
  int latest = 0;
  std::vector<std::map<Z, Z>> trees;
  for (int j = 1; j <= 4; ++j) trees.push_back(tree_parents(k, j));
  for (Z v : diamond(k)) {
    if (v == Z{} || faults.count(v)) continue;
    int best = -1;
    for (const auto& t : trees) {
      const auto p = parent_path(t, v);
      bool clean = true;
      for (Z x : p) clean = clean && !faults.count(x);
      const int depth = static_cast<int>(p.size()) - 1;
      if (clean && (best < 0 || depth < best)) best = depth;
    }
    if (best > latest) latest = best;
  }
  return latest + 1;
}

/// Exact frozen values of the published step tables (k = 1..9, rows f = 0..3).
inline constexpr double kPublishedAverage[9][4] = {
    {2, 2, 2, 2},
    {3, 3.333, 3.515, 3.618},
    {4, 4.5, 4.847, 5.094},
    {5, 5.6, 6.061, 6.417},
    {6, 6.666, 7.213, 7.658},
    {7, 7.714, 8.329, 8.849},
    {8, 8.75, 9.421, 10.009},
    {9, 9.777, 10.498, 11.145},
    {10, 10.8, 11.563, 12.266},
};

inline int published_max(std::int64_t k, int f) {
  if (f == 0) return static_cast<int>(k + 1);
  return k == 1 ? 2 : static_cast<int>(2 * k);
}

}  // namespace oracle
