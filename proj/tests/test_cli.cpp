#include <doctest.h>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "bisect/cli.hpp"
#include "bisect/config_model.hpp"
#include "bisect/json_io.hpp"

using namespace bisect;

namespace {

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  REQUIRE(out.good());
  out << text;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json slurp_json(const std::string& path) { return Json::parse(slurp(path)); }

void write_graph(const std::string& path, int n, std::vector<std::pair<int, int>> edges) {
  write_file(path, graph_to_json(MultiGraph{n, std::move(edges)}).dump());
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("gen emits a graph honoring the degree model") {
  const std::string out = "unit_cli_gen.json";
  CHECK(run_cli({"gen", "--regular", "2", "--n", "6", "--seed", "7", "--out", out}) == 0);
  MultiGraph g = graph_from_json(slurp_json(out));
  CHECK(g.n == 6);
  CHECK(g.edge_count() == 6);  // complete matching of 12 half-edges

  CHECK(run_cli({"gen", "--degrees", "1,1,1,1", "--seed", "3", "--out", out}) == 0);
  CHECK(graph_from_json(slurp_json(out)).edge_count() == 2);

  // Same seed, same bytes; maximum matching tolerates the odd total.
  const std::string out2 = "unit_cli_gen2.json";
  CHECK(run_cli({"gen", "--regular", "3", "--n", "3", "--matching", "maximum", "--seed", "1",
                 "--out", out}) == 0);
  CHECK(run_cli({"gen", "--regular", "3", "--n", "3", "--matching", "maximum", "--seed", "1",
                 "--out", out2}) == 0);
  CHECK(slurp(out) == slurp(out2));
  CHECK(graph_from_json(slurp_json(out)).edge_count() == 4);

  std::remove(out.c_str());
  std::remove(out2.c_str());
}

TEST_CASE("cut solves the documented path example") {
  const std::string graph = "unit_cli_p4.json";
  const std::string out = "unit_cli_cut.json";
  write_graph(graph, 4, {{1, 2}, {2, 3}, {3, 4}});

  CHECK(run_cli({"cut", "--graph", graph, "--objective", "max-bisection", "--out", out}) == 0);
  Json j = slurp_json(out);
  CHECK(j.at("objective") == "max-bisection");
  CHECK(j.at("value").get<double>() == 3.0);
  CHECK(j.at("side").size() == 4);

  // A and B are even, so each must split 1/1; that rules out the alternating
  // optimum {1,3} and caps the constrained value at 2.
  CHECK(run_cli({"cut", "--graph", graph, "--objective", "constrained-max-bisection", "--side-a",
                 "1,3", "--side-b", "2,4", "--out", out}) == 0);
  CHECK(slurp_json(out).at("value").get<double>() == 2.0);

  const std::string cycle = "unit_cli_c4.json";
  write_graph(cycle, 4, {{1, 2}, {2, 3}, {3, 4}, {1, 4}});
  CHECK(run_cli({"cut", "--graph", cycle, "--objective", "alpha-cut", "--alpha", "0.25", "--out",
                 out}) == 0);
  CHECK(slurp_json(out).at("value").get<double>() == 2.0);

  std::remove(graph.c_str());
  std::remove(cycle.c_str());
  std::remove(out.c_str());
}

TEST_CASE("hybrid evaluates plain and constrained variants") {
  const std::string graph = "unit_cli_k2.json";
  const std::string out = "unit_cli_hybrid.json";
  write_graph(graph, 2, {{1, 2}});

  CHECK(run_cli({"hybrid", "--graph", graph, "--p", "0.75", "--mode", "exact", "--out", out}) ==
        0);
  Json j = slurp_json(out);
  CHECK(j.at("value").get<double>() == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(j.at("mode") == "exact");

  // Pinning both edges inside their sides forces every labeling's optimum.
  const std::string pair2 = "unit_cli_pair.json";
  write_graph(pair2, 4, {{1, 2}, {3, 4}});
  CHECK(run_cli({"hybrid", "--graph", pair2, "--p", "0.75", "--mode", "exact", "--side-a", "1,2",
                 "--side-b", "3,4", "--out", out}) == 0);
  CHECK(slurp_json(out).at("value").get<double>() == doctest::Approx(1.0).epsilon(1e-12));

  std::remove(graph.c_str());
  std::remove(pair2.c_str());
  std::remove(out.c_str());
}

TEST_CASE("interp-check runs a check and reports its verdict") {
  const std::string cfg = "unit_cli_interp.json";
  const std::string out = "unit_cli_interp_out.json";
  write_file(cfg, R"({"degrees":[1,1,1,1],"side_a":[1,2],"side_b":[3,4],"p":0.75,
                      "mode":"exact"})");
  CHECK(run_cli({"interp-check", "--kind", "subadditivity", "--config", cfg, "--out", out}) == 0);
  Json j = slurp_json(out);
  CHECK(j.at("passed") == true);
  CHECK(j.at("lhs").get<double>() == doctest::Approx(1.0).epsilon(1e-12));

  // A failed parse of the instance is a usage error, not a crash.
  write_file(cfg, R"({"degrees":[1,1,1,1],"side_a":[1,2],"side_b":[3,4],"p":0.75,"oops":1})");
  CHECK(run_cli({"interp-check", "--kind", "lipschitz", "--config", cfg}) == 2);

  std::remove(cfg.c_str());
  std::remove(out.c_str());
}

TEST_CASE("experiment writes the configured format") {
  const std::string cfg = "unit_cli_exp.json";
  const std::string out = "unit_cli_exp.csv";
  write_file(cfg, R"({"kind":"convergence","model":{"kind":"regular","r":2},"sizes":[6],
                      "p":1.0,"replicas":2,"solver":"exact","master_seed":5,"format":"csv"})");
  CHECK(run_cli({"experiment", "--config", cfg, "--out", out}) == 0);
  const std::string text = slurp(out);
  CHECK(text.rfind("n,replica,seed,value,value_per_n,stderr,runtime_ms\n", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 3);  // header + 2 records
  CHECK(text.find('\r') == std::string::npos);

  std::remove(cfg.c_str());
  std::remove(out.c_str());
}

TEST_CASE("exit codes distinguish usage, domain, and guard failures") {
  CHECK(run_cli({"no-such-command"}) == 2);
  CHECK(run_cli({"gen", "--bogus-flag"}) == 2);
  CHECK(run_cli({"cut", "--graph", "unit_cli_missing.json", "--objective", "max-cut"}) == 2);
  CHECK(run_cli({"gen", "--regular", "2", "--n", "4", "--degrees", "1,1"}) == 2);
  CHECK(run_cli(std::vector<std::string>{"--help"}) == 0);

  // 30 vertices exceed the exact solvers' bitmask range.
  const std::string graph = "unit_cli_big.json";
  CHECK(run_cli({"gen", "--regular", "1", "--n", "30", "--seed", "2", "--out", graph}) == 0);
  CHECK(run_cli({"cut", "--graph", graph, "--objective", "max-cut"}) == 3);
  std::remove(graph.c_str());
}

}  // TEST_SUITE
