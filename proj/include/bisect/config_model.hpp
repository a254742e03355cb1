#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "bisect/degrees.hpp"

namespace bisect {

// Copy `copy` (1-based) of the half-edges attached to `vertex`.  Ordering is
// lexicographic, which fixes the canonical order of everything built from these.
struct HalfEdge {
  int vertex = 0;
  int copy = 0;
  auto operator<=>(const HalfEdge&) const = default;
};

using HalfEdgePair = std::pair<HalfEdge, HalfEdge>;

// Partial matching of the half-edge multiset of a degree sequence.  Canonical form:
// each pair stores its lexicographically smaller half-edge first and the pair list is
// sorted, so equal matchings compare equal.
class Matching {
 public:
  static Matching from_pairs(DegreeSequence base, std::vector<HalfEdgePair> pairs);

  const DegreeSequence& base() const { return base_; }
  const std::vector<HalfEdgePair>& pairs() const { return pairs_; }
  int edge_count() const { return static_cast<int>(pairs_.size()); }
  bool complete() const { return 2 * static_cast<long long>(pairs_.size()) == base_.total(); }

  // Half-edges of the base multiset not covered by any pair, in canonical order.
  std::vector<HalfEdge> unmatched() const;

  bool operator==(const Matching& other) const { return pairs_ == other.pairs_; }
  bool operator<(const Matching& other) const { return pairs_ < other.pairs_; }

 private:
  Matching(DegreeSequence base, std::vector<HalfEdgePair> pairs)
      : base_(std::move(base)), pairs_(std::move(pairs)) {}
  DegreeSequence base_;
  std::vector<HalfEdgePair> pairs_;
};

// Multigraph on vertices 1..n; loops (u == v) and parallel edges allowed.  Edge order
// is meaningful: labels elsewhere index into it.
struct MultiGraph {
  int n = 0;
  std::vector<std::pair<int, int>> edges;  // each stored with u <= v

  int edge_count() const { return static_cast<int>(edges.size()); }
};

struct EdgeTypeCounts {
  long long alpha = 0;  // edges inside A
  long long beta = 0;   // edges inside B
  long long gamma = 0;  // cross edges
  auto operator<=>(const EdgeTypeCounts&) const = default;
};

using VertexSet = std::vector<int>;  // sorted, distinct, 1-based

std::vector<HalfEdge> build_half_edges(const DegreeSequence& d);

// Uniform complete matching of the half-edge multiset; total degree must be even.
Matching sample_complete_matching(const DegreeSequence& d, std::uint64_t seed);

// Uniform maximum matching: identical to the above for even totals, leaves exactly one
// half-edge unmatched for odd totals.  Used where a model with odd total degree still
// needs a graph (the leftover half-edge contributes no edge).
Matching sample_maximum_matching(const DegreeSequence& d, std::uint64_t seed);

MultiGraph graph_of_matching(const Matching& m);

// (A, B) must partition {1..n}; either side may be empty.
EdgeTypeCounts classify_matching(const Matching& m, const VertexSet& A, const VertexSet& B);

// A matching with counts t over the split exists iff 2*alpha + gamma <= d(A) and
// 2*beta + gamma <= d(B).
bool is_feasible(const DegreeSequence& d, const VertexSet& A, const VertexSet& B,
                 const EdgeTypeCounts& t);

// All matchings in the class M(alpha, beta, gamma), each exactly once, in canonical
// order.  Infeasible counts give an empty result; more than max_half_edges half-edges
// is refused (guard_error).
std::vector<Matching> enumerate_class(const DegreeSequence& d, const VertexSet& A,
                                      const VertexSet& B, const EdgeTypeCounts& t,
                                      int max_half_edges = 16);

// Uniform member of M(alpha, beta, gamma) by sequential uniform typed-edge addition.
Matching sample_in_class(const DegreeSequence& d, const VertexSet& A, const VertexSet& B,
                         const EdgeTypeCounts& t, std::uint64_t seed);

// Streaming form of enumerate_class: calls fn once per class member without
// materializing the matchings.  Class averages use this to stay within memory on the
// larger enumerable models.
void visit_class(const DegreeSequence& d, const VertexSet& A, const VertexSet& B,
                 const EdgeTypeCounts& t,
                 const std::function<void(std::span<const HalfEdgePair>)>& fn,
                 int max_half_edges = 16);

// Visits every (partial) matching of the half-edge multiset exactly once; with
// complete_only, only complete matchings.  Pairs arrive in canonical order.  This is
// the shared enumeration core for the class and expectation sweeps.
void visit_matchings(const DegreeSequence& d, bool complete_only,
                     const std::function<void(std::span<const HalfEdgePair>)>& fn,
                     int max_half_edges = 16);

// Shard `shard` of the same enumeration, split on the decision for the first
// half-edge (shard 0: left unmatched; shard j: paired with the j-th later one).
// The shards over [0, total) partition the full enumeration, so sweeps can fan out
// over shards and merge in shard order for thread-count-independent results.
void visit_matchings_shard(const DegreeSequence& d, bool complete_only, int shard,
                           const std::function<void(std::span<const HalfEdgePair>)>& fn,
                           int max_half_edges = 16);

void validate_partition(int n, const VertexSet& A, const VertexSet& B);

}  // namespace bisect
