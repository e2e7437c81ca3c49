// JSON and Graphviz DOT renderings of networks, trees, routes and simulation runs.
// Node order is always lexicographic (x, y), so output is byte-deterministic.

#pragma once

#include <cstddef>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "gaussist/gauss_int.hpp"
#include "gaussist/network.hpp"
#include "gaussist/simulator.hpp"
#include "gaussist/trees.hpp"

namespace gaussist {

using json = nlohmann::ordered_json;

inline json to_json(GaussInt z) { return json{{"x", z.x}, {"y", z.y}}; }

inline json network_json(const Network& net) {
  json nodes = json::array();
  for (GaussInt v : net.nodes()) nodes.push_back(to_json(v));
  json edges = json::array();
  for (const auto& [a, b] : net.edges()) edges.push_back(json::array({to_json(a), to_json(b)}));
  return json{{"k", net.k()}, {"alpha", to_json(net.alpha())}, {"nodes", std::move(nodes)}, {"edges", std::move(edges)}};
}

inline std::string network_dot(const Network& net) {
  std::ostringstream os;
  os << "graph G_" << net.k() << " {\n";
  os << "  label=\"alpha = " << to_string(net.alpha()) << "\";\n";
  for (GaussInt v : net.nodes()) os << "  \"" << v << "\";\n";
  for (const auto& [a, b] : net.edges()) {
    os << "  \"" << a << "\" -- \"" << b << '"';
    if (Network::is_wraparound(a, b)) os << " [style=dashed]";
    os << ";\n";
  }
  os << "}\n";
  return os.str();
}

inline json tree_json(const SpanningTree& t) {
  json parents = json::array();
  for (const TreeEdge& e : t.edges())
    parents.push_back(json{{"node", to_string(e.child)}, {"parent", to_string(e.parent)}, {"dir", to_string(e.dir)}});
  return json{{"j", t.index()}, {"k", t.network().k()}, {"parents", std::move(parents)}};
}

inline std::string tree_dot(const SpanningTree& t) {
  std::ostringstream os;
  os << "digraph T" << t.index() << "_k" << t.network().k() << " {\n";
  for (GaussInt v : t.network().nodes()) os << "  \"" << v << "\";\n";
  for (const TreeEdge& e : t.edges()) os << "  \"" << e.parent << "\" -> \"" << e.child << "\";\n";
  os << "}\n";
  return os.str();
}

inline json route_json(GaussInt s, GaussInt d, int j, const Network& net, const std::vector<GaussInt>& path) {
  json nodes = json::array();
  for (GaussInt v : path) nodes.push_back(to_json(v));
  return json{{"s", to_string(s)}, {"d", to_string(d)}, {"j", j}, {"k", net.k()}, {"path", std::move(nodes)}};
}

inline json run_json(const SimRun& run) {
  json faults = json::array();
  for (GaussInt f : run.faults) faults.push_back(to_string(f));
  json rounds = json::array();
  for (const RoundStats& r : run.rounds)
    rounds.push_back(json{{"round", r.round}, {"flood_messages", r.flood_messages}, {"trace_messages", r.trace_messages}});
  json first = json::object();
  json reached = json::object();
  for (std::size_t i = 0; i < run.network.size(); ++i) {
    const std::string name = to_string(run.network.node(i));
    first[name] = run.first_receipt[i] < 0 ? json(nullptr) : json(run.first_receipt[i]);
    reached[name] = run.reached_round[i] < 0 ? json(nullptr) : json(run.reached_round[i]);
  }
  return json{{"k", run.network.k()},
              {"root", to_string(run.root)},
              {"faults", std::move(faults)},
              {"last_active_round", run.last_active_round},
              {"flood_last_round", run.flood_last_round},
              {"messages_sent", run.messages_sent},
              {"trace_messages", run.trace_messages},
              {"rounds", std::move(rounds)},
              {"first_receipt", std::move(first)},
              {"reached_round", std::move(reached)}};
}

}  // namespace gaussist
