// Local routing along the four independent spanning trees.
//
// Routing from s is reduced to routing from 0 by the translation x -> x - s. A
// transient node t picks its outgoing port from (t, d) alone: the destination is
// rotated into quadrant 1, the decision table below is consulted, and the result
// is rotated back. The tree index never enters the decision; it is only carried
// as an annotation, which is what makes the four routes node-disjoint.

#pragma once

#include <algorithm>
#include <array>
#include <bitset>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "gaussist/gauss_int.hpp"
#include "gaussist/network.hpp"
#include "gaussist/region.hpp"
#include "gaussist/trees.hpp"

namespace gaussist {

/// Raised when a routing table cell marked unreachable is hit, or a route loops.
class RoutingInvariantError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct Packet {
  GaussInt source;
  GaussInt destination;
  int tree = 1;
  std::vector<std::uint8_t> payload;
};

struct RoutingDecision {
  enum class Action : std::uint8_t { kForward, kConsume };

  Action action = Action::kConsume;
  Direction direction = Direction::kPlusOne;  // meaningful for kForward only
  int tree = 0;                               // tree annotation, 1..4

  static RoutingDecision forward(Direction d, int tree) { return {Action::kForward, d, tree}; }
  static RoutingDecision consume() { return {}; }

  friend bool operator==(const RoutingDecision&, const RoutingDecision&) = default;
};

/// Root port of tree j: +1, +i, -1, -i for j = 1..4.
constexpr Direction tree_root_direction(int j) { return rotate(Direction::kPlusOne, j - 1); }

inline Direction start_route(GaussInt s, GaussInt d, int j, const Network& net) {
  require_tree_index(j);
  require_tree_order(net.k());
  net.require_canonical(s);
  net.require_canonical(d);
  if (s == d) throw std::invalid_argument("start_route: source equals destination");
  return tree_root_direction(j);
}

namespace detail {

enum class Rule : std::uint8_t {
  kUnreachable,
  kFixed,
  kC1,  // t_x < d_x ? 1[1] : -1[2]
  kC2,  // t_x = d_x ? i[1] : 1[1]
  kC3,  // t_x = d_x ? -i[4] : -1[4]
  kC4,  // t_x < d_x ? 1[2] : -1[4]
  kC5,  // t_x = d_x ? (t_y < d_y ? i[1] : -i[3]) : (t_x < d_x ? 1[2] : -1[4])
  kC6,  // t_y = d_y ? 1[2] : i[2]
  kC7,  // t_x = -k-1+d_x ? i[3] : -1[3]        (destination in S1 u B1)
  kC7b, // t_x = -k+d_x ? -i[3] : -1[3]         (destination in R1 or Q1)
  kC8,  // t_y = -k-1+d_y ? -1[4] : -i[4]
  kC9,  // t_y = -k-1+d_y ? -1[4] : -i[3]
};

struct Cell {
  Rule rule;
  Direction dir = Direction::kPlusOne;
  int tree = 0;
};

constexpr Direction kE = Direction::kPlusOne, kN = Direction::kPlusI, kW = Direction::kMinusOne,
                    kS = Direction::kMinusI;

constexpr Cell fixed(Direction d, int tree) { return {Rule::kFixed, d, tree}; }
constexpr Cell rule(Rule r) { return {r}; }
inline constexpr Cell kNone{Rule::kUnreachable};

// Rows: transient region (S u B, R, Q, P) x quadrant 1..4.
// Columns: destination region in quadrant 1 (S1 u B1, R1, Q1, P1).
inline constexpr std::array<std::array<Cell, 4>, 16> kDecisionTable = {{
    {rule(Rule::kC1), rule(Rule::kC2), rule(Rule::kC2), fixed(kE, 1)},      // S1 u B1
    {rule(Rule::kC3), rule(Rule::kC4), fixed(kN, 1), kNone},                // R1
    {kNone, fixed(kS, 3), rule(Rule::kC5), kNone},                          // Q1
    {fixed(kW, 2), kNone, kNone, kNone},                                    // P1
    {fixed(kN, 2), rule(Rule::kC6), rule(Rule::kC6), fixed(kN, 2)},         // S2 u B2
    {kNone, kNone, kNone, fixed(kN, 3)},                                    // R2
    {fixed(kN, 3), kNone, kNone, kNone},                                    // Q2
    {fixed(kW, 2), kNone, kNone, fixed(kW, 2)},                             // P2
    {rule(Rule::kC7), rule(Rule::kC7b), rule(Rule::kC7b), fixed(kN, 3)},    // S3 u B3
    {kNone, fixed(kS, 3), fixed(kS, 3), kNone},                             // R3
    {kNone, fixed(kS, 3), rule(Rule::kC9), kNone},                          // Q3
    {fixed(kN, 3), kNone, kNone, kNone},                                    // P3
    {fixed(kS, 4), fixed(kS, 4), rule(Rule::kC8), fixed(kS, 4)},            // S4 u B4
    {fixed(kN, 3), kNone, kNone, kNone},                                    // R4
    {fixed(kN, 3), kNone, kNone, kNone},                                    // Q4
    {fixed(kW, 4), fixed(kW, 4), kNone, fixed(kS, 4)},                      // P4
}};

constexpr int table_column(RegionClass c) {
  switch (c) {
    case RegionClass::kS:
    case RegionClass::kB: return 0;
    case RegionClass::kR: return 1;
    case RegionClass::kQ: return 2;
    case RegionClass::kP: return 3;
    case RegionClass::kOrigin: break;
  }
  return -1;
}

inline RoutingDecision evaluate(const Cell& cell, GaussInt t, GaussInt d, std::int64_t k) {
  using R = RoutingDecision;
  switch (cell.rule) {
    case Rule::kUnreachable: break;
    case Rule::kFixed: return R::forward(cell.dir, cell.tree);
    case Rule::kC1: return t.x < d.x ? R::forward(kE, 1) : R::forward(kW, 2);
    case Rule::kC2: return t.x == d.x ? R::forward(kN, 1) : R::forward(kE, 1);
    case Rule::kC3: return t.x == d.x ? R::forward(kS, 4) : R::forward(kW, 4);
    case Rule::kC4: return t.x < d.x ? R::forward(kE, 2) : R::forward(kW, 4);
    case Rule::kC5:
      if (t.x == d.x) return t.y < d.y ? R::forward(kN, 1) : R::forward(kS, 3);
      return t.x < d.x ? R::forward(kE, 2) : R::forward(kW, 4);
    case Rule::kC6: return t.y == d.y ? R::forward(kE, 2) : R::forward(kN, 2);
    case Rule::kC7: return t.x == -k - 1 + d.x ? R::forward(kN, 3) : R::forward(kW, 3);
    case Rule::kC7b: return t.x == -k + d.x ? R::forward(kS, 3) : R::forward(kW, 3);
    case Rule::kC8: return t.y == -k - 1 + d.y ? R::forward(kW, 4) : R::forward(kS, 4);
    case Rule::kC9: return t.y == -k - 1 + d.y ? R::forward(kW, 4) : R::forward(kS, 3);
  }
  throw RoutingInvariantError("unreachable routing cell hit at t=" + to_string(t) + ", d=" + to_string(d) +
                              ", k=" + std::to_string(k));
}

}  // namespace detail

/// Decision of transient node t for a destination d in quadrant 1 (both relative to root 0).
inline RoutingDecision table_decision(GaussInt t, GaussInt d, std::int64_t k) {
  require_tree_order(k);
  const Region dr = classify(d, k);
  if (dr.quadrant != 1) throw std::invalid_argument("table_decision: destination " + to_string(d) + " is not in quadrant 1");
  if (t == d) return RoutingDecision::consume();
  const Region tr = classify(t, k);
  if (tr.cls == RegionClass::kOrigin) throw std::invalid_argument("table_decision: the root is not a transient node");
  const int row = (tr.quadrant - 1) * 4 + detail::table_column(tr.cls);
  return detail::evaluate(detail::kDecisionTable[static_cast<std::size_t>(row)][static_cast<std::size_t>(
                              detail::table_column(dr.cls))],
                          t, d, k);
}

/// Decision for any destination: rotate d into quadrant 1, decide, rotate back.
inline RoutingDecision decide(GaussInt t, GaussInt d, std::int64_t k) {
  require_tree_order(k);
  if (t == d) return RoutingDecision::consume();
  const Region dr = classify(d, k);
  if (dr.cls == RegionClass::kOrigin) throw std::invalid_argument("decide: the root is never a destination");
  const int m = dr.quadrant - 1;
  RoutingDecision r = table_decision(rho(t, -m), rho(d, -m), k);
  r.direction = rotate(r.direction, m);
  r.tree = (r.tree - 1 + m) % 4 + 1;
  return r;
}

/// Full route s..d along tree j using only per-node decisions.
inline std::vector<GaussInt> route(GaussInt s, GaussInt d, int j, const Network& net) {
  const Direction first = start_route(s, d, j, net);
  const std::int64_t k = net.k();
  const GaussInt target = net.reduce(d - s);
  std::vector<GaussInt> rel{GaussInt{}, net.step(GaussInt{}, first)};
  while (rel.back() != target) {
    const RoutingDecision r = decide(rel.back(), target, k);
    if (r.tree != j)
      throw RoutingInvariantError("tree annotation " + std::to_string(r.tree) + " at " + to_string(rel.back()) +
                                  " while routing on tree " + std::to_string(j));
    rel.push_back(net.step(rel.back(), r.direction));
    if (static_cast<std::int64_t>(rel.size()) > 2 * k + 1)
      throw RoutingInvariantError("route exceeded 2k hops toward " + to_string(target));
  }
  std::vector<GaussInt> out;
  out.reserve(rel.size());
  for (GaussInt v : rel) out.push_back(net.reduce(v + s));
  return out;
}

// ---------------------------------------------------------------------------
// Degree/condition engine

namespace detail {

inline bool in_regions(Region r, std::initializer_list<Region> set) {
  return std::find(set.begin(), set.end(), r) != set.end();
}

constexpr Region B(int q) { return {RegionClass::kB, q}; }
constexpr Region R(int q) { return {RegionClass::kR, q}; }
constexpr Region Q(int q) { return {RegionClass::kQ, q}; }
constexpr Region P(int q) { return {RegionClass::kP, q}; }
constexpr Region S(int q) { return {RegionClass::kS, q}; }

constexpr std::int64_t floor_mod(std::int64_t a, std::int64_t m) { return ((a % m) + m) % m; }

}  // namespace detail

/// Alternative router driven by the node's tree degree and four conditions on
/// the destination, evaluated in the tree-1 frame. `back` is the port through which
/// the packet arrived (it points at the sender).
inline Direction cnd_decision(GaussInt c, GaussInt d, Direction back, int j, std::int64_t k) {
  using namespace detail;
  const int r = (5 - j) % 4;
  const GaussInt cr = rho(c, r);
  const GaussInt dr = rho(d, r);
  const Region dreg = classify(dr, k);
  const bool wrap_set = in_regions(dreg, {R(2), Q(2), B(3), P(3), S(3)});
  const bool cnd1 = !wrap_set && floor_mod(cr.x, k) != floor_mod(dr.x + k, k);
  const bool cnd2 = wrap_set && cr.x != dr.x + k + 1;
  const bool cnd3 = reduce(cr + GaussInt{1, 0}, k) == dr;
  const bool cnd4 = in_regions(dreg, {R(1), Q(1), R(3), Q(3), B(4), P(4), S(4)});

  const PackedLinks links = packed_links(classify(c, k), j);
  switch (links.child_count() + 1) {
    case 4:
      if (cnd1 || cnd2 || cnd3) return rotate(back, 2);
      if (cnd4) return rotate(back, 3);
      return rotate(back, 1);
    case 3:
      if (reduce(c + unit(rotate(back, 3)), k) == d) return rotate(back, 3);
      return rotate(back, 2);
    case 2:
      return rotate(back, 2);
    default:
      throw RoutingInvariantError("packet for " + to_string(d) + " reached leaf " + to_string(c) + " of tree " +
                                  std::to_string(j));
  }
}

inline std::vector<GaussInt> route_cnd(GaussInt s, GaussInt d, int j, const Network& net) {
  const Direction first = start_route(s, d, j, net);
  const std::int64_t k = net.k();
  const GaussInt target = net.reduce(d - s);
  std::vector<GaussInt> rel{GaussInt{}, net.step(GaussInt{}, first)};
  Direction back = opposite(first);
  while (rel.back() != target) {
    const Direction out = cnd_decision(rel.back(), target, back, j, k);
    rel.push_back(net.step(rel.back(), out));
    back = opposite(out);
    if (static_cast<std::int64_t>(rel.size()) > 2 * k + 1)
      throw RoutingInvariantError("cnd route exceeded 2k hops toward " + to_string(target));
  }
  std::vector<GaussInt> out;
  out.reserve(rel.size());
  for (GaussInt v : rel) out.push_back(net.reduce(v + s));
  return out;
}

/// First (d, j) whose routed path differs from the tree path, if any.
struct RouteMismatch {
  GaussInt destination;
  int tree;
};

inline std::optional<RouteMismatch> find_route_mismatch(const Network& net, bool cnd_engine = false) {
  const auto trees = build_all_trees(net);
  for (GaussInt d : net.nodes()) {
    if (d == GaussInt{}) continue;
    for (int j = 1; j <= 4; ++j) {
      std::vector<GaussInt> path;
      try {
        path = cnd_engine ? route_cnd({}, d, j, net) : route({}, d, j, net);
      } catch (const RoutingInvariantError&) {
        return RouteMismatch{d, j};
      }
      if (path != trees[static_cast<std::size_t>(j - 1)].path_to(d)) return RouteMismatch{d, j};
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Applications

/// Per-node set of trees whose route from the source avoided every fault.
class BroadcastResult {
 public:
  BroadcastResult(Network net, GaussInt source, std::vector<GaussInt> faults)
      : net_(std::move(net)), source_(source), faults_(std::move(faults)), delivered_(net_.size()) {}

  GaussInt source() const { return source_; }
  const std::vector<GaussInt>& faults() const { return faults_; }
  bool is_faulty(GaussInt v) const { return std::find(faults_.begin(), faults_.end(), v) != faults_.end(); }

  std::bitset<4> delivered(GaussInt v) const { return delivered_[net_.index_of(v)]; }

  std::vector<int> trees(GaussInt v) const {
    std::vector<int> out;
    const auto b = delivered(v);
    for (int j = 1; j <= 4; ++j)
      if (b.test(static_cast<std::size_t>(j - 1))) out.push_back(j);
    return out;
  }

  /// Non-faulty nodes with no delivering tree.
  std::vector<GaussInt> unreached() const {
    std::vector<GaussInt> out;
    for (GaussInt v : net_.nodes())
      if (!is_faulty(v) && delivered(v).none()) out.push_back(v);
    return out;
  }

  bool all_reached() const { return unreached().empty(); }

  void mark(GaussInt v, int j) { delivered_[net_.index_of(v)].set(static_cast<std::size_t>(j - 1)); }

 private:
  Network net_;
  GaussInt source_;
  std::vector<GaussInt> faults_;
  std::vector<std::bitset<4>> delivered_;
};

/// Sends to every node along all four trees; a copy is lost if its route touches a fault.
inline BroadcastResult broadcast(GaussInt s, const std::vector<GaussInt>& faults, const Network& net) {
  require_tree_order(net.k());
  net.require_canonical(s);
  if (faults.size() > 3) throw std::invalid_argument("broadcast tolerates at most 3 faulty nodes");
  std::vector<bool> faulty(net.size(), false);
  for (GaussInt f : faults) {
    if (f == s) throw std::invalid_argument("broadcast: the source cannot be faulty");
    faulty[net.index_of(f)] = true;
  }
  BroadcastResult result(net, s, faults);
  for (int j = 1; j <= 4; ++j) result.mark(s, j);
  for (GaussInt v : net.nodes()) {
    if (v == s || faulty[net.index_of(v)]) continue;
    for (int j = 1; j <= 4; ++j) {
      const auto path = route(s, v, j, net);
      const bool clean =
          std::none_of(path.begin(), path.end(), [&](GaussInt x) { return faulty[net.index_of(x)]; });
      if (clean) result.mark(v, j);
    }
  }
  return result;
}

struct Share {
  int tree = 0;
  std::vector<std::uint8_t> bytes;
  std::vector<GaussInt> route;
};

struct SecureSplit {
  std::array<Share, 4> shares;

  /// Intermediate nodes (neither endpoint) that lie on more than one route.
  std::size_t overlap_count() const {
    std::multiset<GaussInt> seen;
    for (const Share& s : shares)
      for (std::size_t i = 1; i + 1 < s.route.size(); ++i) seen.insert(s.route[i]);
    std::size_t overlap = 0;
    for (auto it = seen.begin(); it != seen.end(); it = seen.upper_bound(*it))
      if (seen.count(*it) > 1) ++overlap;
    return overlap;
  }

  std::size_t intermediate_count() const {
    std::size_t n = 0;
    for (const Share& s : shares) n += s.route.size() - 2;
    return n;
  }

  std::vector<std::uint8_t> reassemble() const {
    std::vector<std::uint8_t> out;
    for (const Share& s : shares) out.insert(out.end(), s.bytes.begin(), s.bytes.end());
    return out;
  }
};

/// Cuts the message into four contiguous parts and routes part j along tree j.
/// Throws RoutingInvariantError if an intermediate node would see two parts.
inline SecureSplit secure_split(GaussInt s, GaussInt d, const std::vector<std::uint8_t>& message, const Network& net) {
  SecureSplit out;
  const std::size_t chunk = (message.size() + 3) / 4;
  for (int j = 1; j <= 4; ++j) {
    Share& share = out.shares[static_cast<std::size_t>(j - 1)];
    share.tree = j;
    const std::size_t begin = std::min(message.size(), chunk * static_cast<std::size_t>(j - 1));
    const std::size_t end = std::min(message.size(), begin + chunk);
    share.bytes.assign(message.begin() + static_cast<std::ptrdiff_t>(begin),
                       message.begin() + static_cast<std::ptrdiff_t>(end));
    share.route = route(s, d, j, net);
  }
  if (out.overlap_count() != 0)
    throw RoutingInvariantError("secure_split: routes from " + to_string(s) + " to " + to_string(d) +
                                " share an intermediate node");
  return out;
}

/// One hop per line: "step i: node (a) --dir--> node (b) [tree j]".
inline std::string format_trace(const std::vector<GaussInt>& path, int j, const Network& net) {
  std::ostringstream os;
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    const auto dir = net.direction_between(path[i], path[i + 1]);
    if (!dir) throw std::logic_error("format_trace: consecutive nodes are not adjacent");
    os << "step " << (i + 1) << ": node (" << path[i] << ") --" << *dir << "--> node (" << path[i + 1] << ") [tree "
       << j << "]\n";
  }
  return os.str();
}

}  // namespace gaussist
