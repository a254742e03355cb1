#include "bisect/json_io.hpp"

#include <charconv>
#include <fstream>
#include <stdexcept>
#include <system_error>

#include "bisect/errors.hpp"

namespace bisect {

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

Json load_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw config_error("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw config_error(path + ": " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
  if (!out) throw std::runtime_error("write failed for " + path);
}

Json graph_to_json(const MultiGraph& g) {
  Json edges = Json::array();
  for (const auto& [u, v] : g.edges) edges.push_back({u, v});
  return Json{{"n", g.n}, {"edges", std::move(edges)}};
}

MultiGraph graph_from_json(const Json& j) {
  MultiGraph g;
  try {
    g.n = j.at("n").get<int>();
    for (const Json& e : j.at("edges")) {
      if (!e.is_array() || e.size() != 2)
        throw config_error("each edge must be a [u, v] pair");
      int u = e[0].get<int>(), v = e[1].get<int>();
      if (u < 1 || v < 1 || u > g.n || v > g.n)
        throw config_error("edge endpoint out of range");
      if (v < u) std::swap(u, v);
      g.edges.emplace_back(u, v);
    }
  } catch (const Json::exception& e) {
    throw config_error(std::string("bad graph document: ") + e.what());
  }
  if (g.n < 1) throw config_error("graph needs at least one vertex");
  return g;
}

Json signed_graph_to_json(const SignedGraph& g) {
  Json j = graph_to_json(g.graph);
  j["labels"] = g.labels;
  return j;
}

SignedGraph signed_graph_from_json(const Json& j) {
  SignedGraph g;
  g.graph = graph_from_json(j);
  if (j.contains("labels")) {
    try {
      g.labels = j.at("labels").get<std::vector<int>>();
    } catch (const Json::exception& e) {
      throw config_error(std::string("bad labels: ") + e.what());
    }
    if (g.labels.size() != g.graph.edges.size())
      throw config_error("need exactly one label per edge");
    for (int s : g.labels)
      if (s != 1 && s != -1) throw config_error("labels must be +1 or -1");
  } else {
    g.labels.assign(g.graph.edges.size(), 1);
  }
  return g;
}

Json cut_result_to_json(const CutResult& r) {
  Json j{{"value", r.value}, {"side", r.witness.sides()}};
  if (r.optima_count) j["optima_count"] = *r.optima_count;
  return j;
}

Json hybrid_estimate_to_json(const HybridEstimate& e) {
  return Json{{"value", e.value},
              {"stderr", e.stderror},
              {"samples", e.samples},
              {"mode", e.mode == EstimateMode::exact ? "exact" : "monte-carlo"},
              {"heuristic_lower_bound", e.heuristic_lower_bound}};
}

Json distribution_to_json(const DegreeDistribution& mu) {
  Json mass = Json::object();
  for (const auto& [k, p] : mu.masses()) mass[std::to_string(k)] = p;
  return Json{{"mass", std::move(mass)}};
}

DegreeDistribution distribution_from_json(const Json& j) {
  std::map<int, double> mass;
  try {
    for (const auto& [key, p] : j.at("mass").items()) {
      int k = 0;
      const auto res = std::from_chars(key.data(), key.data() + key.size(), k);
      if (res.ec != std::errc{} || res.ptr != key.data() + key.size())
        throw config_error("mass keys must be decimal integers, got \"" + key + "\"");
      mass[k] = p.get<double>();
    }
  } catch (const Json::exception& e) {
    throw config_error(std::string("bad distribution: ") + e.what());
  }
  try {
    return DegreeDistribution::from_mass(std::move(mass));
  } catch (const std::invalid_argument& e) {
    throw config_error(e.what());
  }
}

Json matching_to_json(const Matching& m) {
  Json pairs = Json::array();
  for (const HalfEdgePair& pr : m.pairs())
    pairs.push_back(Json{{pr.first.vertex, pr.first.copy}, {pr.second.vertex, pr.second.copy}});
  return pairs;
}

Matching matching_from_json(const DegreeSequence& base, const Json& j) {
  std::vector<HalfEdgePair> pairs;
  try {
    for (const Json& pr : j) {
      if (!pr.is_array() || pr.size() != 2 || !pr[0].is_array() || pr[0].size() != 2 ||
          !pr[1].is_array() || pr[1].size() != 2)
        throw config_error("each matching pair must be [[v,c],[v,c]]");
      pairs.push_back({{pr[0][0].get<int>(), pr[0][1].get<int>()},
                       {pr[1][0].get<int>(), pr[1][1].get<int>()}});
    }
  } catch (const Json::exception& e) {
    throw config_error(std::string("bad matching: ") + e.what());
  }
  try {
    return Matching::from_pairs(base, std::move(pairs));
  } catch (const std::invalid_argument& e) {
    throw config_error(e.what());
  }
}

Json check_report_to_json(const CheckReport& r) {
  return Json{{"passed", r.passed},
              {"lhs", r.lhs},
              {"rhs", r.rhs},
              {"slack", r.slack},
              {"witness", r.witness}};
}

Json desired_report_to_json(const DesiredInequalityReport& r) {
  Json j = check_report_to_json(r.report);
  j["sos_at_one"] = r.sos_at_one;
  j["sos_at_half"] = r.sos_at_half;
  return j;
}

EdgeTypeCounts edge_counts_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 3)
    throw config_error("edge-type counts must be an [alpha, beta, gamma] triple");
  try {
    return EdgeTypeCounts{j[0].get<long long>(), j[1].get<long long>(),
                          j[2].get<long long>()};
  } catch (const Json::exception& e) {
    throw config_error(std::string("bad edge-type counts: ") + e.what());
  }
}

DegreeSequence degrees_from_json(const Json& j) {
  try {
    return DegreeSequence(j.get<std::vector<int>>());
  } catch (const Json::exception& e) {
    throw config_error(std::string("bad degree sequence: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw config_error(std::string("bad degree sequence: ") + e.what());
  }
}

VertexSet vertex_set_from_json(const Json& j) {
  try {
    return j.get<std::vector<int>>();
  } catch (const Json::exception& e) {
    throw config_error(std::string("bad vertex set: ") + e.what());
  }
}

}  // namespace bisect
