// The dense diameter-optimal Gaussian network G_k generated by k + (k+1)i.

#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <limits>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "gaussist/gauss_int.hpp"

namespace gaussist {

// Floor division rounding to nearest (ties toward +inf).
constexpr std::int64_t round_div(std::int64_t num, std::int64_t den) {
  const std::int64_t twice = 2 * num + den;
  const std::int64_t d2 = 2 * den;
  std::int64_t q = twice / d2;
  if ((twice % d2 != 0) && ((twice < 0) != (d2 < 0))) --q;
  return q;
}

/// Canonical representative of z mod alpha_k: the unique w with z = w (mod alpha_k)
/// and |w.x| + |w.y| <= k. The diamond is a complete residue system.
inline GaussInt reduce(GaussInt z, std::int64_t k) {
  if (k < 1) throw std::invalid_argument("network order k must be >= 1");
  const GaussInt alpha = generator(k);
  const std::int64_t n = norm(alpha);
  const GaussInt p = z * conj(alpha);
  const GaussInt q{round_div(p.x, n), round_div(p.y, n)};
  for (std::int64_t dx : {0, -1, 1}) {
    for (std::int64_t dy : {0, -1, 1}) {
      const GaussInt w = z - (q + GaussInt{dx, dy}) * alpha;
      if (l1(w) <= k) return w;
    }
  }
  throw std::logic_error("reduce: no canonical residue near rounded quotient for " + to_string(z));
}

/// Immutable network handle. Copies share the underlying tables.
class Network {
 public:
  static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

  explicit Network(std::int64_t k) : data_(build(k)) {}

  std::int64_t k() const { return data_->k; }
  GaussInt alpha() const { return generator(data_->k); }
  std::size_t size() const { return data_->nodes.size(); }

  /// All nodes in lexicographic (x, y) order.
  const std::vector<GaussInt>& nodes() const { return data_->nodes; }
  GaussInt node(std::size_t index) const { return data_->nodes[index]; }

  bool contains(GaussInt v) const { return l1(v) <= data_->k; }

  /// Dense index of a canonical node; throws for non-canonical input.
  std::size_t index_of(GaussInt v) const {
    require_canonical(v);
    return data_->index[slot(v)];
  }

  void require_canonical(GaussInt v) const {
    if (!contains(v))
      throw std::invalid_argument("node " + to_string(v) + " is not canonical for k=" +
                                  std::to_string(data_->k));
  }

  GaussInt reduce(GaussInt z) const { return gaussist::reduce(z, data_->k); }

  GaussInt step(GaussInt v, Direction d) const {
    return data_->nodes[data_->neighbor[index_of(v) * 4 + static_cast<std::size_t>(d)]];
  }

  std::size_t step_index(std::size_t v, Direction d) const {
    return data_->neighbor[v * 4 + static_cast<std::size_t>(d)];
  }

  /// [v+1, v-1, v+i, v-i], reduced.
  std::array<GaussInt, 4> neighbors(GaussInt v) const {
    return {step(v, Direction::kPlusOne), step(v, Direction::kMinusOne), step(v, Direction::kPlusI),
            step(v, Direction::kMinusI)};
  }

  /// Direction d with v = u + d (mod alpha), if u and v are adjacent.
  std::optional<Direction> direction_between(GaussInt u, GaussInt v) const {
    for (Direction d : kAllDirections)
      if (step(u, d) == v) return d;
    return std::nullopt;
  }

  bool adjacent(GaussInt u, GaussInt v) const { return direction_between(u, v).has_value(); }

  /// tau_s(z) = (z + s) mod alpha.
  GaussInt translate(GaussInt z, GaussInt s) const {
    require_canonical(z);
    require_canonical(s);
    return reduce(z + s);
  }

  /// Rotation restricted to V_k; the diamond is rotation invariant so no reduction is needed.
  GaussInt rotate(GaussInt z, int t) const {
    require_canonical(z);
    return rho(z, t);
  }

  /// BFS hop counts from `source`, indexed like nodes().
  std::vector<int> distances_from(GaussInt source) const {
    std::vector<int> dist(size(), -1);
    std::deque<std::size_t> queue;
    const std::size_t s = index_of(source);
    dist[s] = 0;
    queue.push_back(s);
    while (!queue.empty()) {
      const std::size_t u = queue.front();
      queue.pop_front();
      for (Direction d : kAllDirections) {
        const std::size_t w = step_index(u, d);
        if (dist[w] < 0) {
          dist[w] = dist[u] + 1;
          queue.push_back(w);
        }
      }
    }
    return dist;
  }

  int bfs_distance(GaussInt u, GaussInt v) const { return distances_from(u)[index_of(v)]; }

  /// Undirected edges, each once, ordered by the smaller endpoint then the larger.
  std::vector<std::pair<GaussInt, GaussInt>> edges() const {
    std::vector<std::pair<GaussInt, GaussInt>> out;
    out.reserve(2 * size());
    for (std::size_t u = 0; u < size(); ++u) {
      for (Direction d : {Direction::kPlusOne, Direction::kPlusI}) {
        GaussInt a = node(u);
        GaussInt b = node(step_index(u, d));
        if (b < a) std::swap(a, b);
        out.emplace_back(a, b);
      }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  /// True when the edge only exists through the modular wrap (raw difference is not a unit).
  static bool is_wraparound(GaussInt u, GaussInt v) { return l1(u - v) != 1; }

 private:
  struct Data {
    std::int64_t k = 0;
    std::vector<GaussInt> nodes;
    std::vector<std::size_t> index;     // (2k+1)^2 box -> node index
    std::vector<std::size_t> neighbor;  // node * 4 + direction -> node index
  };

  std::size_t slot(GaussInt v) const {
    const std::int64_t side = 2 * data_->k + 1;
    return static_cast<std::size_t>((v.x + data_->k) * side + (v.y + data_->k));
  }

  static std::shared_ptr<const Data> build(std::int64_t k) {
    if (k < 1) throw std::invalid_argument("network order k must be >= 1, got " + std::to_string(k));
    if (k > 10000) throw std::invalid_argument("network order k too large: " + std::to_string(k));
    auto data = std::make_shared<Data>();
    data->k = k;
    const std::int64_t side = 2 * k + 1;
    data->index.assign(static_cast<std::size_t>(side * side), npos);
    for (std::int64_t x = -k; x <= k; ++x) {
      const std::int64_t span = k - (x < 0 ? -x : x);
      for (std::int64_t y = -span; y <= span; ++y) {
        data->index[static_cast<std::size_t>((x + k) * side + (y + k))] = data->nodes.size();
        data->nodes.push_back({x, y});
      }
    }
    data->neighbor.resize(data->nodes.size() * 4);
    for (std::size_t i = 0; i < data->nodes.size(); ++i) {
      for (Direction d : kAllDirections) {
        const GaussInt w = gaussist::reduce(data->nodes[i] + unit(d), k);
        data->neighbor[i * 4 + static_cast<std::size_t>(d)] =
            data->index[static_cast<std::size_t>((w.x + k) * side + (w.y + k))];
      }
    }
    return data;
  }

  std::shared_ptr<const Data> data_;
};

inline std::array<GaussInt, 4> neighbors(GaussInt v, std::int64_t k) { return Network(k).neighbors(v); }

inline GaussInt translate(GaussInt z, GaussInt s, std::int64_t k) { return Network(k).translate(z, s); }

inline int bfs_distance(GaussInt u, GaussInt v, std::int64_t k) { return Network(k).bfs_distance(u, v); }

}  // namespace gaussist
