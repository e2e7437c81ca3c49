#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli_app.hpp"
#include "gaussist/export.hpp"

using namespace gaussist;
namespace fs = std::filesystem;

namespace {

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "gaussist");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p);
  return {std::istreambuf_iterator<char>(f), {}};
}

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("gaussist_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST(Export, NetworkJson) {
  const json doc = network_json(Network(3));
  EXPECT_EQ(doc["k"], 3);
  EXPECT_EQ(doc["alpha"]["x"], 3);
  EXPECT_EQ(doc["alpha"]["y"], 4);
  EXPECT_EQ(doc["nodes"].size(), 25u);
  EXPECT_EQ(doc["edges"].size(), 50u);
  EXPECT_EQ(doc["nodes"][0]["x"], -3);
}

TEST(Export, NetworkDotMarksWrapEdges) {
  const Network net(3);
  const std::string dot = network_dot(net);
  std::size_t dashed = 0, pos = 0;
  while ((pos = dot.find("style=dashed", pos)) != std::string::npos) {
    ++dashed;
    ++pos;
  }
  std::size_t wraps = 0;
  for (const auto& [a, b] : net.edges()) wraps += Network::is_wraparound(a, b);
  EXPECT_EQ(dashed, wraps);
  EXPECT_GT(wraps, 0u);
  EXPECT_NE(dot.find("\"-2-i\""), std::string::npos);
}

TEST(Export, TreeAndRouteJson) {
  const Network net(4);
  const json t = tree_json(build_tree(net, 2));
  EXPECT_EQ(t["j"], 2);
  EXPECT_EQ(t["parents"].size(), 40u);
  const json r = route_json({}, {-2, 2}, 1, net, route({}, {-2, 2}, 1, net));
  EXPECT_EQ(r["path"].size(), 6u);
  EXPECT_EQ(r["d"], "-2+2i");
  EXPECT_NE(tree_dot(build_tree(net, 1)).find("\"0\" -> \"1\""), std::string::npos);
}

TEST(Export, RunJson) {
  const json r = run_json(run({2, {}, {{1, 0}}, std::nullopt}));
  EXPECT_EQ(r["messages_sent"].get<int>() > 0, true);
  EXPECT_TRUE(r["first_receipt"]["1"].is_null());
  EXPECT_EQ(r["first_receipt"]["0"], 0);
  EXPECT_FALSE(r["rounds"].empty());
}

TEST(Cli, Gen) {
  const auto r = invoke({"gen", "--k", "3", "--format", "json"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(json::parse(r.out)["nodes"].size(), 25u);
  EXPECT_EQ(json::parse(invoke({"gen", "--k", "1"}).out)["nodes"].size(), 5u);
  EXPECT_EQ(invoke({"gen", "--k", "0"}).code, 2);
  EXPECT_EQ(invoke({"gen", "--k", "2", "--format", "png"}).code, 2);
  EXPECT_EQ(invoke({"gen"}).code, 2);
  EXPECT_EQ(invoke({"gen", "--k", "2", "-o", "/nonexistent/dir/x.json"}).code, 2);
  EXPECT_EQ(invoke({"gen", "--k", "4", "--format", "dot"}).out, invoke({"gen", "--k", "4", "--format", "dot"}).out);
}

TEST(Cli, Tree) {
  const auto r = invoke({"tree", "--k", "4", "--j", "1"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(json::parse(r.out)["parents"].size(), 40u);
  EXPECT_EQ(invoke({"tree", "--k", "1"}).code, 2);
  EXPECT_EQ(invoke({"tree", "--k", "4", "--j", "5"}).code, 2);

  const fs::path dir = scratch_dir("tree");
  const auto all = invoke({"tree", "--k", "4", "--j", "all", "--format", "dot", "-o", (dir / "t.dot").string()});
  EXPECT_EQ(all.code, 0);
  for (int j = 1; j <= 4; ++j) EXPECT_TRUE(fs::exists(dir / ("t_j" + std::to_string(j) + ".dot")));
  fs::remove_all(dir);
}

TEST(Cli, Route) {
  const auto r = invoke({"route", "--k", "4", "--s", "0", "--d", "-2+2i", "--j", "1"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 5);
  EXPECT_NE(r.out.find("node (-2+2i) [tree 1]\n"), std::string::npos);

  const auto r2 = invoke({"route", "--k", "4", "--s", "0", "--d", "-2-2i", "--j", "2", "--json"});
  const json path = json::parse(r2.out)["path"];
  std::vector<std::string> names;
  for (const auto& p : path) names.push_back(to_string(GaussInt{p["x"].get<std::int64_t>(), p["y"].get<std::int64_t>()}));
  EXPECT_EQ(names, (std::vector<std::string>{"0", "i", "2i", "3i", "1+3i", "-2-2i"}));

  const auto all = invoke({"route", "--k", "5", "--s", "2-i", "--d", "-1+3i", "--all"});
  EXPECT_EQ(all.code, 0);
  EXPECT_NE(all.out.find("disjoint: yes"), std::string::npos);
  const auto cnd = invoke({"route", "--k", "5", "--s", "2-i", "--d", "-1+3i", "--all", "--engine", "cnd"});
  EXPECT_EQ(cnd.out, all.out);

  EXPECT_EQ(invoke({"route", "--k", "4", "--s", "1", "--d", "1"}).code, 2);
  EXPECT_EQ(invoke({"route", "--k", "4", "--s", "0", "--d", "2+ii"}).code, 2);
  EXPECT_EQ(invoke({"route", "--k", "4", "--s", "0", "--d", "5"}).code, 2);
}

TEST(Cli, Verify) {
  const auto r = invoke({"verify", "--k", "2..6"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out.find("FAIL"), std::string::npos);
  EXPECT_NE(r.out.find("all properties pass"), std::string::npos);
  EXPECT_NE(invoke({"verify", "--k", "4"}).out.find("height: pass (height 8)"), std::string::npos);
  EXPECT_NE(invoke({"verify", "--k", "2"}).out.find("4 trees, 12 edges each"), std::string::npos);
  EXPECT_EQ(invoke({"verify", "--k", "1..3"}).code, 2);
  EXPECT_EQ(invoke({"verify", "--k", "3..x"}).code, 2);
}

TEST(Cli, Simulate) {
  const auto r = invoke({"simulate", "--k", "3"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("last_active_round=4"), std::string::npos);
  EXPECT_NE(r.out.find("messages_sent=76"), std::string::npos);
  const auto j = invoke({"simulate", "--k", "3", "--faults", "1,i", "--json"});
  EXPECT_EQ(json::parse(j.out)["faults"].size(), 2u);
  EXPECT_EQ(invoke({"simulate", "--k", "3", "--faults", "0"}).code, 2);
}

TEST(Cli, Sweep) {
  const fs::path dir = scratch_dir("sweep");
  const auto r = invoke({"sweep", "--k", "1..4", "--faults", "0..3", "--avg-csv", (dir / "avg.csv").string(), "--max-csv",
                      (dir / "max.csv").string()});
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(r.out.empty());
  EXPECT_NE(r.err.find("step convention"), std::string::npos);
  const std::string avg = slurp(dir / "avg.csv");
  const std::string max = slurp(dir / "max.csv");
  EXPECT_EQ(avg.rfind("alpha,1+2i,2+3i,3+4i,4+5i\n", 0), 0u);
  EXPECT_NE(avg.find("3 Faulty,2.000,3.618,5.095,6.418\n"), std::string::npos);
  EXPECT_NE(max.find("No Faulty,2,3,4,5\n"), std::string::npos);
  EXPECT_NE(max.find("1 Faulty,2,4,6,8\n"), std::string::npos);
  fs::remove_all(dir);

  const auto sampled = invoke({"sweep", "--k", "3", "--faults", "2", "--samples", "500", "--seed", "9", "--quiet"});
  EXPECT_EQ(sampled.code, 0);
  EXPECT_TRUE(sampled.err.find("k=3") == std::string::npos);
  EXPECT_EQ(invoke({"sweep", "--k", "3", "--faults", "0..4"}).code, 2);
}

TEST(Cli, RangeParsing) {
  EXPECT_EQ(cli::parse_range("2..6"), (std::pair<std::int64_t, std::int64_t>{2, 6}));
  EXPECT_EQ(cli::parse_range("4"), (std::pair<std::int64_t, std::int64_t>{4, 4}));
  EXPECT_THROW(cli::parse_range("6..2"), cli::UsageError);
  EXPECT_THROW(cli::parse_range("a"), cli::UsageError);
  EXPECT_EQ(cli::indexed_path("out/t.dot", 3), "out/t_j3.dot");
  EXPECT_EQ(cli::indexed_path("a.b/t", 2), "a.b/t_j2");
}
