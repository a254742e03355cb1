#pragma once

#include <string>

#include <json.hpp>

#include "bisect/config_model.hpp"
#include "bisect/cuts.hpp"
#include "bisect/hybrid.hpp"
#include "bisect/interpolation.hpp"

namespace bisect {

// Ordered so that emitted documents keep a stable key order run to run.
using Json = nlohmann::ordered_json;

// Shortest decimal that round-trips the exact double, for data files.
std::string format_double(double x);

Json load_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

Json graph_to_json(const MultiGraph& g);
MultiGraph graph_from_json(const Json& j);

// {"n":..., "edges":[[u,v],...], "labels":[...]}; labels default to all +1.
Json signed_graph_to_json(const SignedGraph& g);
SignedGraph signed_graph_from_json(const Json& j);

Json cut_result_to_json(const CutResult& r);
Json hybrid_estimate_to_json(const HybridEstimate& e);
Json check_report_to_json(const CheckReport& r);
Json desired_report_to_json(const DesiredInequalityReport& r);

Json distribution_to_json(const DegreeDistribution& mu);  // {"mass": {"k": p, ...}}
DegreeDistribution distribution_from_json(const Json& j);

Json matching_to_json(const Matching& m);  // [[[v,c],[v,c]], ...]
Matching matching_from_json(const DegreeSequence& base, const Json& j);

EdgeTypeCounts edge_counts_from_json(const Json& j);  // [alpha, beta, gamma]
DegreeSequence degrees_from_json(const Json& j);      // plain array
VertexSet vertex_set_from_json(const Json& j);        // plain array

}  // namespace bisect
