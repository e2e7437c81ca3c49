// Command-line front end: gen, tree, route, verify, simulate, sweep.
// Exit codes: 0 success, 1 verification failure, 2 usage error.

#pragma once

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "gaussist/export.hpp"
#include "gaussist/gauss_int.hpp"
#include "gaussist/network.hpp"
#include "gaussist/region.hpp"
#include "gaussist/router.hpp"
#include "gaussist/simulator.hpp"
#include "gaussist/trees.hpp"

namespace gaussist::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerifyFailed = 1;
inline constexpr int kExitUsage = 2;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// "4" or "2..6" (inclusive).
inline std::pair<std::int64_t, std::int64_t> parse_range(const std::string& text) {
  auto number = [&](const std::string& s) {
    std::size_t used = 0;
    std::int64_t v = 0;
    try {
      v = std::stoll(s, &used);
    } catch (const std::exception&) {
      throw UsageError("malformed range '" + text + "'");
    }
    if (used != s.size()) throw UsageError("malformed range '" + text + "'");
    return v;
  };
  const auto dots = text.find("..");
  if (dots == std::string::npos) {
    const auto v = number(text);
    return {v, v};
  }
  const auto lo = number(text.substr(0, dots));
  const auto hi = number(text.substr(dots + 2));
  if (lo > hi) throw UsageError("empty range '" + text + "'");
  return {lo, hi};
}

inline std::vector<GaussInt> parse_node_list(const std::string& text) {
  std::vector<GaussInt> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(parse_gauss(item));
  return out;
}

inline void write_output(const std::string& path, const std::string& content, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << content;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot write output file '" + path + "'");
  f << content;
  if (!f) throw UsageError("failed writing output file '" + path + "'");
}

/// "trees.dot" + 3 -> "trees_j3.dot".
inline std::string indexed_path(const std::string& path, int j) {
  const auto slash = path.find_last_of('/');
  const auto dot = path.find_last_of('.');
  const std::string tag = "_j" + std::to_string(j);
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) return path + tag;
  return path.substr(0, dot) + tag + path.substr(dot);
}

inline void require_format(const std::string& format) {
  if (format != "dot" && format != "json") throw UsageError("--format must be dot or json");
}

inline int cmd_gen(std::int64_t k, const std::string& format, const std::string& path, std::ostream& out) {
  if (k < 1) throw UsageError("gen requires k >= 1");
  require_format(format);
  const Network net(k);
  write_output(path, format == "dot" ? network_dot(net) : network_json(net).dump(2) + "\n", out);
  return kExitOk;
}

inline int cmd_tree(std::int64_t k, const std::string& which, const std::string& format, const std::string& path,
                    std::ostream& out) {
  if (k < 2) throw UsageError("tree requires k >= 2");
  require_format(format);
  std::vector<int> indices;
  if (which == "all") {
    indices = {1, 2, 3, 4};
  } else {
    int j = 0;
    try {
      std::size_t used = 0;
      j = std::stoi(which, &used);
      if (used != which.size()) j = 0;
    } catch (const std::exception&) {
      j = 0;
    }
    if (j < 1 || j > 4) throw UsageError("--j must be 1..4 or all");
    indices = {j};
  }
  const Network net(k);
  const auto trees = build_all_trees(net);
  for (int j : indices) {
    const SpanningTree& t = trees[static_cast<std::size_t>(j - 1)];
    const std::string text = format == "dot" ? tree_dot(t) : tree_json(t).dump(2) + "\n";
    const bool to_stdout = path.empty() || path == "-";
    write_output(to_stdout || indices.size() == 1 ? path : indexed_path(path, j), text, out);
  }
  return kExitOk;
}

inline int cmd_route(std::int64_t k, const std::string& s_text, const std::string& d_text, const std::string& which,
                     const std::string& engine, bool as_json, std::ostream& out) {
  if (k < 2) throw UsageError("route requires k >= 2");
  if (engine != "table" && engine != "cnd") throw UsageError("--engine must be table or cnd");
  const Network net(k);
  const GaussInt s = parse_gauss(s_text);
  const GaussInt d = parse_gauss(d_text);
  net.require_canonical(s);
  net.require_canonical(d);
  if (s == d) throw UsageError("source and destination must differ");

  std::vector<int> indices;
  if (which == "all") {
    indices = {1, 2, 3, 4};
  } else if (which.size() == 1 && which[0] >= '1' && which[0] <= '4') {
    indices = {which[0] - '0'};
  } else {
    throw UsageError("--j must be 1..4 or all");
  }

  std::vector<std::vector<GaussInt>> paths;
  for (int j : indices) paths.push_back(engine == "cnd" ? route_cnd(s, d, j, net) : route(s, d, j, net));

  bool disjoint = true;
  if (indices.size() == 4) {
    std::vector<int> owner(net.size(), 0);
    for (std::size_t a = 0; a < 4; ++a)
      for (std::size_t p = 1; p + 1 < paths[a].size(); ++p) {
        int& o = owner[net.index_of(paths[a][p])];
        if (o != 0) disjoint = false;
        o = static_cast<int>(a) + 1;
      }
  }

  if (as_json) {
    json arr = json::array();
    for (std::size_t i = 0; i < indices.size(); ++i) arr.push_back(route_json(s, d, indices[i], net, paths[i]));
    json doc = indices.size() == 1 ? arr[0] : json{{"routes", arr}, {"disjoint", disjoint}};
    out << doc.dump(2) << "\n";
  } else {
    for (std::size_t i = 0; i < indices.size(); ++i) {
      if (indices.size() > 1) out << "tree " << indices[i] << " (" << paths[i].size() - 1 << " hops)\n";
      out << format_trace(paths[i], indices[i], net);
    }
    if (indices.size() == 4) out << "disjoint: " << (disjoint ? "yes" : "no") << "\n";
  }
  return disjoint ? kExitOk : kExitVerifyFailed;
}

inline int cmd_verify(const std::string& range, std::ostream& out) {
  const auto [lo, hi] = parse_range(range);
  if (lo < 2) throw UsageError("verify requires k >= 2");
  bool all_ok = true;
  auto report = [&](std::int64_t k, const std::string& name, bool ok, const std::string& detail) {
    all_ok = all_ok && ok;
    out << "k=" << k << " " << name << ": " << (ok ? "pass" : "FAIL");
    if (!detail.empty()) out << " (" << detail << ")";
    out << "\n";
  };
  for (std::int64_t k = lo; k <= hi; ++k) {
    const Network net(k);
    report(k, "partition", partition_is_exact(k), "21 regions");

    std::optional<std::array<SpanningTree, 4>> trees;
    std::string error;
    try {
      trees = build_all_trees(net);
    } catch (const std::logic_error& e) {
      error = e.what();
    }
    if (!trees) {
      report(k, "spanning", false, error);
      continue;
    }
    report(k, "spanning", true,
           "4 trees, " + std::to_string((*trees)[0].edge_count()) + " edges each");

    bool heights_ok = true;
    for (const auto& t : *trees) heights_ok = heights_ok && t.height() == 2 * k;
    report(k, "height", heights_ok, "height " + std::to_string((*trees)[0].height()));

    bool rotation_ok = true;
    const auto base = (*trees)[0].edge_set();
    for (int j = 2; j <= 4; ++j) {
      std::set<std::pair<GaussInt, GaussInt>> rotated;
      for (const auto& [a, b] : base) {
        const GaussInt ra = rho(a, j - 1), rb = rho(b, j - 1);
        rotated.insert(ra < rb ? std::pair{ra, rb} : std::pair{rb, ra});
      }
      rotation_ok = rotation_ok && rotated == (*trees)[static_cast<std::size_t>(j - 1)].edge_set();
    }
    report(k, "rotation", rotation_ok, "");

    const IndependenceReport ind = verify_independence(*trees);
    std::string ind_detail;
    if (ind.violation)
      ind_detail = "node " + to_string(ind.violation->node) + " trees " + std::to_string(ind.violation->tree_a) + "," +
                   std::to_string(ind.violation->tree_b) + " meet at " + to_string(ind.violation->common);
    report(k, "independence", ind.independent, ind_detail);

    bool table_ok = true;
    for (int j = 1; j <= 4; ++j)
      table_ok = table_ok && tree_from_table(net, j).edges() == (*trees)[static_cast<std::size_t>(j - 1)].edges();
    report(k, "link-table", table_ok, "");

    for (bool cnd : {false, true}) {
      const auto mismatch = find_route_mismatch(net, cnd);
      report(k, cnd ? "router-cnd" : "router", !mismatch,
             mismatch ? "d=" + to_string(mismatch->destination) + " j=" + std::to_string(mismatch->tree) : "");
    }
  }
  out << (all_ok ? "all properties pass\n" : "verification FAILED\n");
  return all_ok ? kExitOk : kExitVerifyFailed;
}

inline int cmd_simulate(std::int64_t k, const std::string& root_text, const std::string& faults_text, bool as_json,
                        const std::string& path, std::ostream& out) {
  if (k < 1) throw UsageError("simulate requires k >= 1");
  SimConfig config{k, parse_gauss(root_text), parse_node_list(faults_text), std::nullopt};
  const SimRun r = run(config);
  if (as_json) {
    write_output(path, run_json(r).dump(2) + "\n", out);
    return kExitOk;
  }
  std::ostringstream os;
  os << "k=" << k << " alpha=" << to_string(r.network.alpha()) << " nodes=" << r.network.size() << "\n";
  os << "root=" << to_string(r.root) << " faults=";
  for (std::size_t i = 0; i < r.faults.size(); ++i) os << (i ? "," : "") << to_string(r.faults[i]);
  os << (r.faults.empty() ? "none" : "") << "\n";
  os << "last_active_round=" << r.last_active_round << "\n";
  os << "flood_last_round=" << r.flood_last_round << "\n";
  os << "messages_sent=" << r.messages_sent << "\n";
  os << "trace_messages=" << r.trace_messages << "\n";
  std::size_t unreached = 0;
  for (const auto& [v, status] : reachability_report(r))
    if (status == Reachability::kUnreached) {
      os << "unreached " << to_string(v) << "\n";
      ++unreached;
    }
  os << "unreached_nodes=" << unreached << "\n";
  write_output(path, os.str(), out);
  return kExitOk;
}

struct SweepArgs {
  std::string k_range = "1..9";
  std::string fault_range = "0..3";
  std::string avg_csv;
  std::string max_csv;
  std::optional<std::uint64_t> samples;
  std::uint64_t seed = 1;
  unsigned threads = 0;
  bool quiet = false;
};

inline int cmd_sweep(const SweepArgs& a, std::ostream& out, std::ostream& err) {
  const auto [klo, khi] = parse_range(a.k_range);
  const auto [flo, fhi] = parse_range(a.fault_range);
  if (klo < 1) throw UsageError("sweep requires k >= 1");
  if (flo < 0 || fhi > 3) throw UsageError("--faults must lie within 0..3");
  if (a.samples && *a.samples == 0) throw UsageError("--samples must be positive");

  err << "# step convention: last_active_round = 1 + latest round a node joins a fault-free tree path; "
         "constant offset vs published tables: 0\n";
  std::vector<SweepStats> stats;
  for (std::int64_t k = klo; k <= khi; ++k) {
    for (std::int64_t f = flo; f <= fhi; ++f) {
      SweepOptions opt;
      opt.threads = a.threads;
      opt.samples = a.samples;
      opt.seed = a.seed;
      if (!a.quiet) {
        opt.progress = [&err, k, f, last = std::uint64_t{0}](std::uint64_t done, std::uint64_t total) mutable {
          if (done < total && done - last >= 100000) {
            err << "k=" << k << " f=" << f << " progress " << done << "/" << total << "\n" << std::flush;
            last = done;
          }
        };
      }
      const SweepStats s = sweep(k, static_cast<std::size_t>(f), opt);
      if (!a.quiet)
        err << "k=" << k << " f=" << f << " runs=" << s.runs << " avg=" << s.avg_string() << " max=" << s.max_max
            << " unreached=" << s.unreached_nodes << (s.sampled ? " (sampled)" : "") << "\n";
      stats.push_back(s);
    }
  }
  std::ostringstream avg, max;
  write_sweep_csv(avg, stats, true);
  write_sweep_csv(max, stats, false);
  if (a.avg_csv.empty() && a.max_csv.empty()) {
    out << "# average maximum steps\n" << avg.str() << "# maximum of maximums\n" << max.str();
  } else {
    if (!a.avg_csv.empty()) write_output(a.avg_csv, avg.str(), out);
    if (!a.max_csv.empty()) write_output(a.max_csv, max.str(), out);
  }
  return kExitOk;
}

/// Parses argv and dispatches; never throws.
inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Dense Gaussian network spanning-tree toolkit"};
  app.require_subcommand(1);

  std::int64_t k = 0;
  std::string format = "json", path, which = "1", s_text, d_text, engine = "table", root_text = "0", faults_text,
              range;
  bool as_json = false;
  SweepArgs sw;

  auto* gen = app.add_subcommand("gen", "Emit the network as DOT or JSON");
  gen->add_option("--k", k, "Network order (alpha = k+(k+1)i)")->required();
  gen->add_option("--format", format, "dot or json")->capture_default_str();
  gen->add_option("-o,--out", path, "Output file (default stdout)");

  auto* tree = app.add_subcommand("tree", "Emit spanning tree(s) as DOT or JSON");
  tree->add_option("--k", k, "Network order, >= 2")->required();
  tree->add_option("--j", which, "Tree index 1..4 or all")->capture_default_str();
  tree->add_option("--format", format, "dot or json")->capture_default_str();
  tree->add_option("-o,--out", path, "Output file; with --j all, _j<n> is inserted before the extension");

  auto* rt = app.add_subcommand("route", "Trace the local-decision route from s to d");
  rt->add_option("--k", k, "Network order, >= 2")->required();
  rt->add_option("--s", s_text, "Source node, e.g. 0 or -2+2i")->required();
  rt->add_option("--d", d_text, "Destination node")->required();
  rt->add_option("--j", which, "Tree index 1..4 or all")->capture_default_str();
  auto* all_flag = rt->add_flag("--all", "Route on all four trees and check disjointness");
  rt->add_option("--engine", engine, "table or cnd")->capture_default_str();
  rt->add_flag("--json", as_json, "Emit JSON instead of a hop trace");

  auto* ver = app.add_subcommand("verify", "Run the structural invariant suite");
  ver->add_option("--k", range, "k or k range such as 2..6")->required();

  auto* sim = app.add_subcommand("simulate", "Run one parallel tree construction");
  sim->add_option("--k", k, "Network order")->required();
  sim->add_option("--root", root_text, "Root node")->capture_default_str();
  sim->add_option("--faults", faults_text, "Comma-separated faulty nodes, at most 3");
  sim->add_flag("--json", as_json, "Emit the per-run JSON trace");
  sim->add_option("-o,--out", path, "Output file (default stdout)");

  auto* swp = app.add_subcommand("sweep", "Fault-injection sweep producing the step tables");
  swp->add_option("--k", sw.k_range, "k range")->capture_default_str();
  swp->add_option("--faults", sw.fault_range, "Fault-count range within 0..3")->capture_default_str();
  swp->add_option("--avg-csv", sw.avg_csv, "Average-max CSV path");
  swp->add_option("--max-csv", sw.max_csv, "Max-of-max CSV path");
  swp->add_option("--samples", sw.samples, "Sample this many fault sets per cell instead of enumerating");
  swp->add_option("--seed", sw.seed, "Sampling seed")->capture_default_str();
  swp->add_option("--threads", sw.threads, "Worker threads (0 = hardware)")->capture_default_str();
  swp->add_flag("--quiet", sw.quiet, "Suppress progress on stderr");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    for (const auto* sub : app.get_subcommands()) err << sub->help();
    if (app.get_subcommands().empty()) err << app.help();
    return kExitUsage;
  }

  try {
    if (gen->parsed()) return cmd_gen(k, format, path, out);
    if (tree->parsed()) return cmd_tree(k, which, format, path, out);
    if (rt->parsed()) return cmd_route(k, s_text, d_text, all_flag->count() ? "all" : which, engine, as_json, out);
    if (ver->parsed()) return cmd_verify(range, out);
    if (sim->parsed()) return cmd_simulate(k, root_text, faults_text, as_json, path, out);
    if (swp->parsed()) return cmd_sweep(sw, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitVerifyFailed;
  }
  return kExitUsage;
}

}  // namespace gaussist::cli
