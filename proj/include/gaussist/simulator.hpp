// Synchronous all-port simulation of the parallel four-tree construction with
// node faults, plus exhaustive and sampled fault sweeps.
//
// Round model. Messages sent in round r are delivered in round r. The root sends
// its address on all four ports in round 1. A non-faulty node that first receives
// the address in round r marks itself visited, computes its address relative to
// the root, resolves its parent/child ports in all four trees from its region, and
// in round r+1 forwards the address on its other three ports. Faulty nodes drop
// everything. Alongside the address flood, each tree is traced: the root and then
// every node that has joined tree j send a trace packet on their tree-j child
// ports, so a node joins tree j in the round equal to its tree depth, provided its
// whole tree path is fault free.
//
// A node counts as reached once it has joined at least one tree. last_active_round
// is one more than the round the last node was reached (those nodes still forward
// once). In a fault-free network it equals k + 1, the same as the final round of
// the address flood.

#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <iomanip>
#include <mutex>
#include <numeric>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "gaussist/gauss_int.hpp"
#include "gaussist/network.hpp"
#include "gaussist/region.hpp"
#include "gaussist/trees.hpp"

namespace gaussist {

inline constexpr std::size_t kMaxFaults = 3;

struct SimConfig {
  std::int64_t k = 1;
  GaussInt root{};
  std::vector<GaussInt> faults;
  std::optional<int> max_rounds;  // defaults to 4k + 4

  int round_cap() const { return max_rounds.value_or(static_cast<int>(4 * k + 4)); }
};

/// Ports resolved by a node for one tree.
struct ResolvedLinks {
  std::optional<Direction> parent;
  std::uint8_t children = 0;  // bit per Direction

  bool has_child(Direction d) const { return (children >> static_cast<int>(d)) & 1U; }
};

struct NodeState {
  bool visited = false;  // flips once, on the first address packet
  GaussInt relative{};
  std::optional<Direction> received_on;
  std::array<ResolvedLinks, 4> links{};
};

struct RoundStats {
  int round = 0;
  std::uint64_t flood_messages = 0;
  std::uint64_t trace_messages = 0;
};

enum class Reachability : std::uint8_t { kReached, kUnreached, kFaulty };

struct SimRun {
  Network network;
  GaussInt root{};
  std::vector<GaussInt> faults;

  std::vector<int> first_receipt;               // address flood; -1 = never
  std::array<std::vector<int>, 4> tree_receipt;  // round the node joined tree j; -1 = never
  std::vector<int> reached_round;               // min over trees; -1 = never
  std::vector<NodeState> nodes;

  int last_active_round = 0;
  int flood_last_round = 0;
  std::uint64_t messages_sent = 0;   // address packets
  std::uint64_t trace_messages = 0;  // tree trace packets
  std::vector<RoundStats> rounds;

  bool is_faulty(GaussInt v) const { return std::find(faults.begin(), faults.end(), v) != faults.end(); }
  int first_receipt_of(GaussInt v) const { return first_receipt[network.index_of(v)]; }
  int reached_round_of(GaussInt v) const { return reached_round[network.index_of(v)]; }
};

namespace detail {

// Reusable per-worker state; one instance runs many fault sets for a fixed network.
class SimEngine {
 public:
  explicit SimEngine(Network net, GaussInt root = {})
      : net_(std::move(net)), root_(net_.index_of(root)), root_node_(root) {
    const std::size_t n = net_.size();
    faulty_.assign(n, 0);
    first_.assign(n, -1);
    for (auto& t : tree_.data) t.assign(n, -1);
    state_.assign(n, {});
  }

  const Network& network() const { return net_; }

  /// Runs one construction; returns last_active_round.
  int execute(const std::vector<std::size_t>& faults, int cap, bool record_rounds = false) {
    const std::size_t n = net_.size();
    const std::int64_t k = net_.k();
    std::fill(faulty_.begin(), faulty_.end(), 0);
    for (std::size_t f : faults) {
      if (f == root_) throw std::invalid_argument("the root cannot be faulty");
      faulty_[f] = 1;
    }
    std::fill(first_.begin(), first_.end(), -1);
    for (auto& t : tree_.data) std::fill(t.begin(), t.end(), -1);
    std::fill(state_.begin(), state_.end(), NodeState{});
    messages_ = 0;
    trace_messages_ = 0;
    flood_last_ = 0;
    rounds_.clear();

    flood_now_.clear();
    trace_now_.clear();
    NodeState& rs = state_[root_];
    rs.visited = true;
    first_[root_] = 0;
    for (std::size_t j = 0; j < 4; ++j) {
      tree_.data[j][root_] = 0;
      rs.links[j].children = k == 1 ? std::uint8_t{0xF}
                                    : static_cast<std::uint8_t>(1U << static_cast<int>(rotate(Direction::kPlusOne, static_cast<int>(j))));
    }
    for (Direction d : kAllDirections) send_flood(root_, d, flood_now_);
    for (std::size_t j = 0; j < 4; ++j) send_trace(root_, j, trace_now_);

    int round = 1;
    while (!flood_now_.empty() || !trace_now_.empty()) {
      if (round > cap)
        throw std::runtime_error("simulation exceeded max_rounds=" + std::to_string(cap) + " (k=" +
                                 std::to_string(k) + ")");
      if (record_rounds) rounds_.push_back({round, flood_now_.size(), trace_now_.size()});
      flood_next_.clear();
      trace_next_.clear();
      bool delivered = false;
      for (const Message& m : flood_now_) {
        if (faulty_[m.to]) continue;
        delivered = true;
        NodeState& s = state_[m.to];
        if (s.visited) continue;
        s.visited = true;
        s.received_on = m.port;
        first_[m.to] = round;
        resolve(m.to, m.port, k);
        for (Direction d : kAllDirections)
          if (d != m.port) send_flood(m.to, d, flood_next_);
      }
      if (delivered) flood_last_ = round;
      for (const Message& m : trace_now_) {
        if (faulty_[m.to]) continue;
        const NodeState& s = state_[m.to];
        if (!s.visited) throw std::logic_error("trace packet reached a node before its address packet");
        if (s.links[m.tree].parent != m.port)
          throw std::logic_error("trace packet for tree " + std::to_string(m.tree + 1) + " arrived off the parent port at " +
                                 to_string(net_.node(m.to)));
        if (tree_.data[m.tree][m.to] >= 0) continue;
        tree_.data[m.tree][m.to] = round;
        send_trace(m.to, m.tree, trace_next_);
      }
      std::swap(flood_now_, flood_next_);
      std::swap(trace_now_, trace_next_);
      ++round;
    }

    int last_reached = 0;
    for (std::size_t v = 0; v < n; ++v) {
      if (faulty_[v] || v == root_) continue;
      const int r = reached(v);
      if (r > last_reached) last_reached = r;
      if (r < 0) ++unreached_;
    }
    last_active_ = last_reached + 1;
    return last_active_;
  }

  std::size_t take_unreached() { return std::exchange(unreached_, 0); }

  SimRun snapshot(std::vector<GaussInt> faults) const {
    SimRun run{net_, root_node_, std::move(faults), first_, tree_.data, {}, state_, last_active_, flood_last_,
               messages_, trace_messages_, rounds_};
    run.reached_round.resize(net_.size());
    for (std::size_t v = 0; v < net_.size(); ++v) run.reached_round[v] = v == root_ ? 0 : reached(v);
    return run;
  }

 private:
  struct Message {
    std::size_t to;
    Direction port;  // port on the receiver pointing back at the sender
    std::size_t tree = 0;
  };

  struct TreeRounds {
    std::array<std::vector<int>, 4> data;
  };

  int reached(std::size_t v) const {
    int best = -1;
    for (const auto& t : tree_.data)
      if (t[v] >= 0 && (best < 0 || t[v] < best)) best = t[v];
    return best;
  }

  void send_flood(std::size_t from, Direction d, std::vector<Message>& out) {
    ++messages_;
    out.push_back({net_.step_index(from, d), opposite(d)});
  }

  void send_trace(std::size_t from, std::size_t j, std::vector<Message>& out) {
    const std::uint8_t mask = state_[from].links[j].children;
    for (Direction d : kAllDirections) {
      if (!((mask >> static_cast<int>(d)) & 1U)) continue;
      ++trace_messages_;
      out.push_back({net_.step_index(from, d), opposite(d), j});
    }
  }

  // Relative address from the root, then the four table rows for its region.
  void resolve(std::size_t v, Direction port, std::int64_t k) {
    NodeState& s = state_[v];
    s.relative = net_.reduce(net_.node(v) - root_node_);
    if (k == 1) {
      // Every node is adjacent to the root: each tree is the star.
      for (auto& l : s.links) l = {port, 0};
      return;
    }
    const Region region = classify(s.relative, k);
    for (int j = 1; j <= 4; ++j) {
      const PackedLinks p = packed_links(region, j);
      s.links[static_cast<std::size_t>(j - 1)] = {p.parent, p.children};
    }
  }

  Network net_;
  std::size_t root_;
  GaussInt root_node_;
  std::vector<std::uint8_t> faulty_;
  std::vector<int> first_;
  TreeRounds tree_;
  std::vector<NodeState> state_;
  std::vector<Message> flood_now_, flood_next_, trace_now_, trace_next_;
  std::vector<RoundStats> rounds_;
  std::uint64_t messages_ = 0;
  std::uint64_t trace_messages_ = 0;
  int flood_last_ = 0;
  int last_active_ = 0;
  std::size_t unreached_ = 0;
};

}  // namespace detail

inline void validate_config(const SimConfig& c, const Network& net) {
  net.require_canonical(c.root);
  if (c.faults.size() > kMaxFaults) throw std::invalid_argument("at most 3 faulty nodes are supported");
  std::vector<GaussInt> sorted = c.faults;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw std::invalid_argument("fault set contains duplicates");
  for (GaussInt f : c.faults) {
    net.require_canonical(f);
    if (f == c.root) throw std::invalid_argument("the root cannot be faulty");
  }
}

inline SimRun run(const SimConfig& config) {
  const Network net(config.k);
  validate_config(config, net);
  detail::SimEngine engine(net, config.root);
  std::vector<std::size_t> faults;
  for (GaussInt f : config.faults) faults.push_back(net.index_of(f));
  engine.execute(faults, config.round_cap(), true);
  return engine.snapshot(config.faults);
}

/// Reached / unreached / faulty for every node.
inline std::vector<std::pair<GaussInt, Reachability>> reachability_report(const SimRun& run) {
  std::vector<std::pair<GaussInt, Reachability>> out;
  out.reserve(run.network.size());
  for (std::size_t i = 0; i < run.network.size(); ++i) {
    const GaussInt v = run.network.node(i);
    Reachability r = Reachability::kReached;
    if (run.is_faulty(v)) r = Reachability::kFaulty;
    else if (run.reached_round[i] < 0) r = Reachability::kUnreached;
    out.emplace_back(v, r);
  }
  return out;
}

inline bool all_reached(const std::vector<std::pair<GaussInt, Reachability>>& report) {
  return std::none_of(report.begin(), report.end(),
                      [](const auto& e) { return e.second == Reachability::kUnreached; });
}

/// Tree j assembled from the parent ports the nodes resolved during `run`.
inline SpanningTree resolved_tree(const SimRun& run, int j) {
  require_tree_index(j);
  std::vector<std::optional<Direction>> parent(run.network.size());
  for (std::size_t i = 0; i < run.network.size(); ++i)
    parent[i] = run.nodes[i].links[static_cast<std::size_t>(j - 1)].parent;
  return SpanningTree(j, run.network, std::move(parent));
}

/// Fault-free run at root 0; true iff every tree's resolved parents equal build_tree(j).
inline bool table4_resolution_check(std::int64_t k) {
  require_tree_order(k);
  const SimRun r = run({k, {}, {}, std::nullopt});
  const auto trees = build_all_trees(r.network);
  for (int j = 1; j <= 4; ++j) {
    const SpanningTree t = resolved_tree(r, j);
    if (t.edges() != trees[static_cast<std::size_t>(j - 1)].edges()) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Sweeps

struct SweepOptions {
  unsigned threads = 0;                 // 0 = hardware concurrency
  std::optional<std::uint64_t> samples;  // sample this many fault sets instead of enumerating
  std::uint64_t seed = 1;
  std::function<void(std::uint64_t done, std::uint64_t total)> progress;
};

struct SweepStats {
  std::int64_t k = 0;
  std::size_t faults = 0;
  std::uint64_t runs = 0;
  std::uint64_t sum = 0;  // sum of last_active_round over runs
  int max_max = 0;
  int min_max = 0;
  std::uint64_t unreached_nodes = 0;  // non-faulty nodes left unreached, over all runs
  bool sampled = false;

  double avg_max() const { return runs == 0 ? 0.0 : static_cast<double>(sum) / static_cast<double>(runs); }

  /// Average rounded to three decimals.
  std::string avg_string() const {
    std::ostringstream os;
    os << std::fixed << std::setprecision(3) << avg_max();
    return os.str();
  }

  void merge(const SweepStats& o) {
    if (o.runs == 0) return;
    min_max = runs == 0 ? o.min_max : std::min(min_max, o.min_max);
    runs += o.runs;
    sum += o.sum;
    max_max = std::max(max_max, o.max_max);
    unreached_nodes += o.unreached_nodes;
  }

  void add(int steps) {
    min_max = runs == 0 ? steps : std::min(min_max, steps);
    ++runs;
    sum += static_cast<std::uint64_t>(steps);
    max_max = std::max(max_max, steps);
  }
};

inline std::uint64_t binomial(std::uint64_t n, std::uint64_t r) {
  if (r > n) return 0;
  std::uint64_t out = 1;
  for (std::uint64_t i = 1; i <= r; ++i) out = out * (n - r + i) / i;
  return out;
}

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Advances `combo` (strictly increasing indices < n) to the next combination.
inline bool next_combination(std::vector<std::size_t>& combo, std::size_t n) {
  const std::size_t r = combo.size();
  for (std::size_t i = r; i-- > 0;) {
    if (combo[i] < n - r + i) {
      ++combo[i];
      for (std::size_t j = i + 1; j < r; ++j) combo[j] = combo[j - 1] + 1;
      return true;
    }
  }
  return false;
}

}  // namespace detail

/// Statistics of last_active_round over every fault set of size f drawn from the
/// non-root nodes (or over `options.samples` uniformly drawn sets).
inline SweepStats sweep(std::int64_t k, std::size_t f, const SweepOptions& options = {}) {
  if (f > kMaxFaults) throw std::invalid_argument("sweep supports at most 3 faults");
  const Network net(k);
  std::vector<std::size_t> candidates;
  const std::size_t root = net.index_of({});
  for (std::size_t i = 0; i < net.size(); ++i)
    if (i != root) candidates.push_back(i);
  const std::size_t m = candidates.size();
  const int cap = static_cast<int>(4 * k + 4);

  const std::uint64_t total = options.samples ? *options.samples : binomial(m, f);
  unsigned threads = options.threads ? options.threads : std::max(1U, std::thread::hardware_concurrency());
  if (f == 0) threads = 1;

  SweepStats result;
  result.k = k;
  result.faults = f;
  result.sampled = options.samples.has_value();
  std::mutex merge_mutex;
  std::atomic<std::uint64_t> done{0};
  std::atomic<std::size_t> next_chunk{0};

  // Work is split into chunks: by first fault index when enumerating, by sample blocks when sampling.
  const std::size_t chunk_count = options.samples ? static_cast<std::size_t>((total + 1023) / 1024)
                                                  : (f == 0 ? 1 : m);

  auto worker = [&]() {
    detail::SimEngine engine(net);
    SweepStats local;
    std::vector<std::size_t> faults(f);
    std::vector<std::size_t> combo;
    for (;;) {
      const std::size_t chunk = next_chunk.fetch_add(1);
      if (chunk >= chunk_count) break;
      std::uint64_t chunk_runs = 0;
      auto run_one = [&]() {
        local.add(engine.execute(faults, cap));
        local.unreached_nodes += engine.take_unreached();
        ++chunk_runs;
      };
      if (options.samples) {
        const std::uint64_t begin = static_cast<std::uint64_t>(chunk) * 1024;
        const std::uint64_t end = std::min<std::uint64_t>(total, begin + 1024);
        std::vector<std::size_t> pool = candidates;
        for (std::uint64_t s = begin; s < end; ++s) {
          std::mt19937_64 rng(detail::splitmix64(options.seed * 0x100000001b3ULL + s));
          for (std::size_t i = 0; i < f; ++i) {
            std::uniform_int_distribution<std::size_t> pick(i, m - 1);
            std::swap(pool[i], pool[pick(rng)]);
            faults[i] = pool[i];
          }
          run_one();
        }
      } else if (f == 0) {
        run_one();
      } else {
        // All combinations whose smallest position is `chunk`.
        combo.resize(f);
        if (chunk + f > m) continue;
        for (std::size_t i = 0; i < f; ++i) combo[i] = chunk + i;
        do {
          if (combo[0] != chunk) break;
          for (std::size_t i = 0; i < f; ++i) faults[i] = candidates[combo[i]];
          run_one();
        } while (detail::next_combination(combo, m));
      }
      const std::uint64_t d = done.fetch_add(chunk_runs) + chunk_runs;
      if (options.progress) {
        std::lock_guard<std::mutex> lock(merge_mutex);
        options.progress(d, total);
      }
    }
    std::lock_guard<std::mutex> lock(merge_mutex);
    result.merge(local);
  };

  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return result;
}

/// Writes the sweep table in the layout "alpha,1+2i,...", one row per fault count.
/// `averages` selects the 3-decimal average table, otherwise the maxima.
inline void write_sweep_csv(std::ostream& os, const std::vector<SweepStats>& stats, bool averages) {
  std::vector<std::int64_t> ks;
  std::vector<std::size_t> fs;
  for (const SweepStats& s : stats) {
    if (std::find(ks.begin(), ks.end(), s.k) == ks.end()) ks.push_back(s.k);
    if (std::find(fs.begin(), fs.end(), s.faults) == fs.end()) fs.push_back(s.faults);
  }
  std::sort(ks.begin(), ks.end());
  std::sort(fs.begin(), fs.end());
  os << "alpha";
  for (std::int64_t k : ks) os << ',' << to_string(generator(k));
  os << '\n';
  for (std::size_t f : fs) {
    os << (f == 0 ? std::string("No Faulty") : std::to_string(f) + " Faulty");
    for (std::int64_t k : ks) {
      os << ',';
      auto it = std::find_if(stats.begin(), stats.end(), [&](const SweepStats& s) { return s.k == k && s.faults == f; });
      if (it == stats.end()) continue;
      if (averages) os << it->avg_string();
      else os << it->max_max;
    }
    os << '\n';
  }
}

}  // namespace gaussist
