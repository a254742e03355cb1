#pragma once

#include <cstdint>
#include <string>

#include "bisect/config_model.hpp"
#include "bisect/cuts.hpp"

namespace bisect {

enum class EstimateMode { exact, monte_carlo };
enum class SolverKind { exact, heuristic };

struct HybridEstimate {
  double value = 0.0;
  double stderror = 0.0;  // 0 for exact mode
  long long samples = 0;  // labelings enumerated (exact) or drawn (mc)
  EstimateMode mode = EstimateMode::exact;
  bool heuristic_lower_bound = false;  // set when a heuristic solver was used
};

// Edges get label +1 independently with probability p, else -1.
SignedGraph sample_labeling(const MultiGraph& g, double p, std::uint64_t seed);

// E[max-bisection of (G, random labels)], exact via enumeration of all 2^|E|
// labelings, each weighted p^{#+} (1-p)^{#-}.  Guarded at max_edges.
HybridEstimate hybrid_exact(const MultiGraph& g, double p, int max_edges = 20);

struct McOptions {
  SolverKind solver = SolverKind::exact;
  LocalSearchParams search;  // used when solver == heuristic
  int threads = 1;
};

HybridEstimate hybrid_mc(const MultiGraph& g, double p, long long samples, std::uint64_t seed,
                         const McOptions& opts = {});

// Same expectations for the constrained (A, B)-bisection objective.
HybridEstimate constrained_hybrid_exact(const MultiGraph& g, const VertexSet& A,
                                        const VertexSet& B, double p, int max_edges = 20);
HybridEstimate constrained_hybrid_mc(const MultiGraph& g, const VertexSet& A, const VertexSet& B,
                                     double p, long long samples, std::uint64_t seed,
                                     const McOptions& opts = {});

}  // namespace bisect
