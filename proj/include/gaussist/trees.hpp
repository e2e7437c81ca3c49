// The four node-independent spanning trees T(1)..T(4) rooted at 0.
//
// T(1) is given by an explicit edge set (vertical edges with a few families swapped
// for horizontals); T(j) = rho^(j-1)(T(1)). Every root-to-node path of T(1) also has
// a closed-form word over {1, -1, i, -i} (path_word), and every node's parent and
// child directions follow from its region (parent_child_spec).

#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "gaussist/gauss_int.hpp"
#include "gaussist/network.hpp"
#include "gaussist/region.hpp"

namespace gaussist {

inline constexpr int kTreeCount = 4;

inline void require_tree_index(int j) {
  if (j < 1 || j > kTreeCount) throw std::invalid_argument("tree index must be in 1..4, got " + std::to_string(j));
}

inline void require_tree_order(std::int64_t k) {
  if (k < 2) throw std::invalid_argument("spanning trees require k >= 2, got " + std::to_string(k));
}

/// Directed child -> parent edge; parent = child + dir (mod alpha).
struct TreeEdge {
  GaussInt child;
  GaussInt parent;
  Direction dir;

  friend bool operator==(const TreeEdge&, const TreeEdge&) = default;
};

class SpanningTree {
 public:
  /// `parent_dir[i]` is the direction from node i to its parent; empty only for the root.
  /// Throws std::logic_error unless the pointers form a spanning tree rooted at 0.
  SpanningTree(int index, Network network, std::vector<std::optional<Direction>> parent_dir)
      : index_(index), network_(std::move(network)), parent_dir_(std::move(parent_dir)) {
    require_tree_index(index_);
    validate();
  }

  int index() const { return index_; }
  std::int64_t k() const { return network_.k(); }
  const Network& network() const { return network_; }
  static constexpr GaussInt root() { return {}; }

  std::optional<Direction> parent_direction(GaussInt v) const { return parent_dir_[network_.index_of(v)]; }

  std::optional<GaussInt> parent(GaussInt v) const {
    const auto d = parent_direction(v);
    if (!d) return std::nullopt;
    return network_.step(v, *d);
  }

  /// Directions from v to its children, in Direction order.
  const std::vector<Direction>& child_directions(GaussInt v) const { return children_[network_.index_of(v)]; }

  std::size_t degree(GaussInt v) const {
    return child_directions(v).size() + (parent_direction(v) ? 1 : 0);
  }

  std::size_t edge_count() const { return network_.size() - 1; }

  /// Child -> parent edges ordered by child.
  std::vector<TreeEdge> edges() const {
    std::vector<TreeEdge> out;
    out.reserve(edge_count());
    for (std::size_t i = 0; i < network_.size(); ++i) {
      if (!parent_dir_[i]) continue;
      const GaussInt c = network_.node(i);
      out.push_back({c, network_.step(c, *parent_dir_[i]), *parent_dir_[i]});
    }
    return out;
  }

  /// Undirected edge set as sorted (smaller, larger) pairs.
  std::set<std::pair<GaussInt, GaussInt>> edge_set() const {
    std::set<std::pair<GaussInt, GaussInt>> out;
    for (const TreeEdge& e : edges())
      out.insert(e.child < e.parent ? std::pair{e.child, e.parent} : std::pair{e.parent, e.child});
    return out;
  }

  int depth(GaussInt v) const { return depth_[network_.index_of(v)]; }

  int height() const { return *std::max_element(depth_.begin(), depth_.end()); }

  /// Root-to-v node sequence, root first.
  std::vector<GaussInt> path_to(GaussInt v) const {
    std::vector<GaussInt> path;
    path.reserve(static_cast<std::size_t>(depth(v)) + 1);
    GaussInt cur = v;
    path.push_back(cur);
    while (auto p = parent(cur)) {
      cur = *p;
      path.push_back(cur);
    }
    std::reverse(path.begin(), path.end());
    return path;
  }

 private:
  void validate() {
    const std::size_t n = network_.size();
    if (parent_dir_.size() != n) throw std::logic_error("parent table size mismatch");
    const std::size_t root = network_.index_of(SpanningTree::root());
    if (parent_dir_[root]) throw std::logic_error("root must not have a parent");
    std::size_t count = 0;
    children_.assign(n, {});
    for (std::size_t i = 0; i < n; ++i) {
      if (i == root) continue;
      if (!parent_dir_[i])
        throw std::logic_error("node " + to_string(network_.node(i)) + " has no parent in T(" +
                               std::to_string(index_) + ")");
      ++count;
      const std::size_t p = network_.step_index(i, *parent_dir_[i]);
      children_[p].push_back(opposite(*parent_dir_[i]));
    }
    for (auto& c : children_) std::sort(c.begin(), c.end());
    if (count != n - 1) throw std::logic_error("spanning tree must have |V|-1 edges");

    depth_.assign(n, -1);
    depth_[root] = 0;
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<std::size_t> chain;
      std::size_t cur = i;
      while (depth_[cur] < 0) {
        chain.push_back(cur);
        if (chain.size() > n) throw std::logic_error("parent pointers contain a cycle");
        cur = network_.step_index(cur, *parent_dir_[cur]);
      }
      int d = depth_[cur];
      for (auto it = chain.rbegin(); it != chain.rend(); ++it) depth_[*it] = ++d;
    }
  }

  int index_;
  Network network_;
  std::vector<std::optional<Direction>> parent_dir_;
  std::vector<std::vector<Direction>> children_;
  std::vector<int> depth_;
};

/// T(1) from its edge set: all vertical edges, minus the positive imaginary axis
/// (qi, (q+1)i), 0<=q<=k-1, minus (q-i, q), -k+1<=q<=0, minus (-k, ki); plus the
/// horizontals (q, q+1), 0<=q<=k-1, (-1+qi, qi), 1<=q<=k-1, and (k, ki).
inline SpanningTree build_tree1(const Network& net) {
  const std::int64_t k = net.k();
  require_tree_order(k);
  using Edge = std::pair<GaussInt, GaussInt>;
  std::set<Edge> edges;
  auto key = [](GaussInt a, GaussInt b) { return a < b ? Edge{a, b} : Edge{b, a}; };
  for (GaussInt v : net.nodes()) edges.insert(key(v, net.step(v, Direction::kPlusI)));

  auto remove_vertical = [&](GaussInt lower, GaussInt upper) {
    if (net.step(lower, Direction::kPlusI) != upper || edges.erase(key(lower, upper)) != 1)
      throw std::logic_error("T(1) removal " + to_string(lower) + "," + to_string(upper) + " is not a vertical edge");
  };
  auto add_horizontal = [&](GaussInt left, GaussInt right) {
    if (net.step(left, Direction::kPlusOne) != right || !edges.insert(key(left, right)).second)
      throw std::logic_error("T(1) addition " + to_string(left) + "," + to_string(right) + " is not a new +1 edge");
  };
  for (std::int64_t q = 0; q <= k - 1; ++q) remove_vertical({0, q}, {0, q + 1});
  for (std::int64_t q = -k + 1; q <= 0; ++q) remove_vertical({q, -1}, {q, 0});
  remove_vertical({0, k}, {-k, 0});
  for (std::int64_t q = 0; q <= k - 1; ++q) add_horizontal({q, 0}, {q + 1, 0});
  for (std::int64_t q = 1; q <= k - 1; ++q) add_horizontal({-1, q}, {0, q});
  add_horizontal({k, 0}, {0, k});

  // Orient away from the root.
  std::vector<std::vector<std::size_t>> adj(net.size());
  for (const auto& [a, b] : edges) {
    adj[net.index_of(a)].push_back(net.index_of(b));
    adj[net.index_of(b)].push_back(net.index_of(a));
  }
  std::vector<std::optional<Direction>> parent(net.size());
  std::vector<bool> seen(net.size(), false);
  std::deque<std::size_t> queue{net.index_of({})};
  seen[queue.front()] = true;
  while (!queue.empty()) {
    const std::size_t u = queue.front();
    queue.pop_front();
    for (std::size_t w : adj[u]) {
      if (seen[w]) continue;
      seen[w] = true;
      parent[w] = net.direction_between(net.node(w), net.node(u));
      queue.push_back(w);
    }
  }
  if (edges.size() != net.size() - 1) throw std::logic_error("T(1) edge count differs from |V|-1");
  return SpanningTree(1, net, std::move(parent));
}

/// rho^(j-1) image of T(1).
inline SpanningTree build_tree(const Network& net, int j) {
  require_tree_index(j);
  const SpanningTree t1 = build_tree1(net);
  if (j == 1) return t1;
  std::vector<std::optional<Direction>> parent(net.size());
  for (const TreeEdge& e : t1.edges()) parent[net.index_of(rho(e.child, j - 1))] = rotate(e.dir, j - 1);
  return SpanningTree(j, net, std::move(parent));
}

inline std::array<SpanningTree, 4> build_all_trees(const Network& net) {
  SpanningTree t1 = build_tree1(net);
  auto rotated = [&](int j) {
    std::vector<std::optional<Direction>> parent(net.size());
    for (const TreeEdge& e : t1.edges()) parent[net.index_of(rho(e.child, j - 1))] = rotate(e.dir, j - 1);
    return SpanningTree(j, net, std::move(parent));
  };
  return {t1, rotated(2), rotated(3), rotated(4)};
}

// ---------------------------------------------------------------------------
// Path words

struct WordRun {
  Direction dir;
  std::int64_t count;

  friend bool operator==(const WordRun&, const WordRun&) = default;
};

struct PathWord {
  std::vector<WordRun> runs;

  std::int64_t length() const {
    std::int64_t n = 0;
    for (const WordRun& r : runs) n += r.count;
    return n;
  }

  friend bool operator==(const PathWord&, const PathWord&) = default;
};

/// Compact rendering such as "1^3(-i)^2".
inline std::string to_string(const PathWord& w) {
  std::string out;
  for (const WordRun& r : w.runs) {
    switch (r.dir) {
      case Direction::kPlusOne: out += "1"; break;
      case Direction::kPlusI: out += "i"; break;
      case Direction::kMinusOne: out += "(-1)"; break;
      case Direction::kMinusI: out += "(-i)"; break;
    }
    if (r.count != 1) out += "^" + std::to_string(r.count);
  }
  return out;
}

/// Closed-form T(1) word from 0 to v = c + di.
inline PathWord path_word(GaussInt v, std::int64_t k) {
  require_tree_order(k);
  if (l1(v) > k) throw std::invalid_argument("path_word: node " + to_string(v) + " is not canonical");
  if (v == GaussInt{}) throw std::invalid_argument("path_word: the root has no path word");
  const std::int64_t c = v.x;
  const std::int64_t d = v.y;
  constexpr Direction E = Direction::kPlusOne, N = Direction::kPlusI, S = Direction::kMinusI;
  PathWord w;
  auto push = [&](Direction dir, std::int64_t n) {
    if (n > 0) w.runs.push_back({dir, n});
  };
  if (c >= 1 && c <= k - 1 && d >= 1 && d <= k - c) {
    push(E, c);
    push(N, d);
  } else if (c == 0 && d == k) {
    push(E, k + 1);
  } else if (c == 0 && d >= 1 && d <= k - 1) {
    // Also covers node i (d = 1).
    push(E, k);
    push(S, k - d);
    push(E, 1);
  } else if (c >= -k && c <= -1 && d >= 0 && d <= k + c) {
    push(E, k + c + 1);
    push(S, k - d);
  } else if (c >= -k + 1 && c <= 0 && d >= -k - c && d <= -1) {
    push(E, k + c);
    push(N, k + d + 1);
  } else if (c >= 1 && c <= k && d >= -k + c && d <= 0) {
    push(E, c);
    push(S, -d);
  } else {
    throw std::logic_error("path_word: no row matches " + to_string(v));
  }
  return w;
}

/// Walks a word from 0, reducing each step; returns every visited node.
inline std::vector<GaussInt> expand_word(const PathWord& w, const Network& net) {
  std::vector<GaussInt> path{GaussInt{}};
  for (const WordRun& r : w.runs)
    for (std::int64_t n = 0; n < r.count; ++n) path.push_back(net.step(path.back(), r.dir));
  return path;
}

inline std::vector<GaussInt> tree_path(const SpanningTree& t, GaussInt v) { return t.path_to(v); }

// ---------------------------------------------------------------------------
// Parent / child directions by region

struct NodeLinks {
  Direction parent;
  std::vector<Direction> children;

  friend bool operator==(const NodeLinks&, const NodeLinks&) = default;
};

namespace detail {

struct LinkRow {
  Direction parent;
  std::array<bool, 4> child;  // indexed by Direction
};

// T(1) rows in the order B1 R1 Q1 P1 S1 B2 ... S4.
inline constexpr std::array<LinkRow, 20> kTreeOneLinks = {{
    // quadrant 1
    {Direction::kMinusOne, {true, true, false, true}},
    {Direction::kMinusI, {false, true, false, false}},
    {Direction::kMinusI, {false, true, false, false}},
    {Direction::kMinusOne, {true, true, false, true}},
    {Direction::kMinusOne, {true, true, false, true}},
    // quadrant 2
    {Direction::kMinusOne, {false, false, false, false}},
    {Direction::kPlusI, {true, false, false, true}},
    {Direction::kPlusI, {false, false, false, true}},
    {Direction::kMinusOne, {false, false, false, false}},
    {Direction::kMinusOne, {false, false, false, false}},
    // quadrant 3
    {Direction::kPlusI, {false, false, false, false}},
    {Direction::kMinusI, {false, false, false, false}},
    {Direction::kMinusI, {false, true, false, false}},
    {Direction::kPlusI, {false, false, false, false}},
    {Direction::kPlusI, {false, false, false, false}},
    // quadrant 4
    {Direction::kMinusI, {false, true, false, false}},
    {Direction::kPlusI, {false, false, false, true}},
    {Direction::kPlusI, {false, false, false, true}},
    {Direction::kMinusI, {false, true, false, false}},
    {Direction::kMinusI, {false, false, false, false}},
}};

}  // namespace detail

/// Parent direction plus child directions as a bit mask indexed by Direction.
struct PackedLinks {
  Direction parent;
  std::uint8_t children;

  bool has_child(Direction d) const { return (children >> static_cast<int>(d)) & 1U; }
  int child_count() const { return std::popcount(static_cast<unsigned>(children)); }
};

/// The T(1) table under sigma^(j-1): rows shifted by five, directions rotated by rho.
inline PackedLinks packed_links(Region region, int j) {
  const int shift = j - 1;
  const detail::LinkRow& row =
      detail::kTreeOneLinks[static_cast<std::size_t>(region_row(region) - 5 * shift + 40) % 20];
  PackedLinks out{rotate(row.parent, shift), 0};
  for (Direction d : kAllDirections)
    if (row.child[static_cast<std::size_t>(d)]) out.children |= static_cast<std::uint8_t>(1U << static_cast<int>(rotate(d, shift)));
  return out;
}

/// Parent and child directions of a node in `region` for tree j.
inline NodeLinks parent_child_spec(Region region, int j) {
  require_tree_index(j);
  if (region.cls == RegionClass::kOrigin) throw std::invalid_argument("parent_child_spec: the origin has no row");
  const PackedLinks p = packed_links(region, j);
  NodeLinks out{p.parent, {}};
  for (Direction d : kAllDirections)
    if (p.has_child(d)) out.children.push_back(d);
  return out;
}

/// Tree j materialized purely from parent_child_spec.
inline SpanningTree tree_from_table(const Network& net, int j) {
  require_tree_order(net.k());
  std::vector<std::optional<Direction>> parent(net.size());
  for (std::size_t i = 0; i < net.size(); ++i) {
    const GaussInt v = net.node(i);
    if (v == GaussInt{}) continue;
    parent[i] = parent_child_spec(classify(v, net.k()), j).parent;
  }
  return SpanningTree(j, net, std::move(parent));
}

// ---------------------------------------------------------------------------
// Independence

struct IndependenceViolation {
  GaussInt node;
  int tree_a;
  int tree_b;
  GaussInt common;
};

struct IndependenceReport {
  bool independent = true;
  std::optional<IndependenceViolation> violation;
  std::size_t pairs_checked = 0;
};

/// Checks that for every v != 0 the four root-to-v paths share only 0 and v.
inline IndependenceReport verify_independence(const std::array<SpanningTree, 4>& trees) {
  const Network& net = trees[0].network();
  IndependenceReport report;
  std::vector<int> owner(net.size(), 0);
  for (std::size_t i = 0; i < net.size(); ++i) {
    const GaussInt v = net.node(i);
    if (v == GaussInt{}) continue;
    std::fill(owner.begin(), owner.end(), 0);
    for (int j = 1; j <= 4; ++j) {
      const auto path = trees[static_cast<std::size_t>(j - 1)].path_to(v);
      for (std::size_t p = 1; p + 1 < path.size(); ++p) {
        int& o = owner[net.index_of(path[p])];
        if (o != 0) {
          report.independent = false;
          report.violation = IndependenceViolation{v, o, j, path[p]};
          return report;
        }
        o = j;
      }
    }
    report.pairs_checked += 6;
  }
  return report;
}

inline IndependenceReport verify_independence(std::int64_t k) {
  require_tree_order(k);
  return verify_independence(build_all_trees(Network(k)));
}

}  // namespace gaussist
