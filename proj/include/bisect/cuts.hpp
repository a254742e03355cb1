#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "bisect/config_model.hpp"

namespace bisect {

// Multigraph with one label in {-1, +1} per edge, indexed like graph.edges.
struct SignedGraph {
  MultiGraph graph;
  std::vector<int> labels;
};

SignedGraph all_plus(const MultiGraph& g);
SignedGraph all_minus(const MultiGraph& g);

// Two-sided vertex partition, sides named 1 and 2.  Canonical form puts vertex 1 on
// side 1 (an unordered partition, so this is just a naming convention).  Balance is a
// property of specific objectives, not of the type: max-cut witnesses may be skewed.
class Bisection {
 public:
  explicit Bisection(std::vector<int> sides);

  int n() const { return static_cast<int>(sides_.size()); }
  int side(int v) const { return sides_.at(static_cast<std::size_t>(v - 1)); }
  const std::vector<int>& sides() const { return sides_; }
  int side_count(int which) const;
  bool balanced() const;

  bool operator==(const Bisection&) const = default;

 private:
  std::vector<int> sides_;
};

struct CutResult {
  long long value = 0;
  Bisection witness;
  std::optional<long long> optima_count;  // filled by exact solvers
};

// Sum of labels over edges with endpoints on different sides.  Loops never cross.
long long signed_cut_value(const SignedGraph& g, const Bisection& b);

struct ExactGuards {
  int solve_n = 26;      // exhaustive solvers
  int enumerate_n = 24;  // collecting all optima
  int delta_n = 12;      // delta_matrix
};

// Exhaustive solvers (guarded).  Ties break to the enumeration-first witness, which is
// deterministic; optima_count counts canonical optimal partitions.
CutResult max_cut(const MultiGraph& g, const ExactGuards& guards = {});
CutResult min_bisection(const MultiGraph& g, const ExactGuards& guards = {});
CutResult signed_max_bisection(const SignedGraph& g, const ExactGuards& guards = {});

// Bisection balanced separately inside A and inside B (and overall); for odd |A| and
// odd |B| the two unit imbalances must cancel.  Such a bisection always exists.
CutResult constrained_max_bisection(const SignedGraph& g, const VertexSet& A,
                                    const VertexSet& B, const ExactGuards& guards = {});

// All canonical optima of the constrained problem.
std::vector<Bisection> enumerate_optimal_constrained(const SignedGraph& g, const VertexSet& A,
                                                     const VertexSet& B,
                                                     const ExactGuards& guards = {});

enum class CutSense { maximize, minimize };

// Optimum over partitions with one side of size floor(ratio*n) or ceil(ratio*n).
CutResult alpha_cut(const SignedGraph& g, double ratio, CutSense sense,
                    const ExactGuards& guards = {});

struct LocalSearchParams {
  int restarts = 10;
  int sweeps = 300;             // n proposals per sweep
  double cooling = 0.995;       // temperature factor per sweep
  double initial_temperature = 0.0;  // 0 -> 2 * max degree
};

// Simulated-annealing search over balance-preserving swaps; with a constraint pair the
// move set is swaps within A, within B, and cross-side A/B pair swaps.  The value is a
// lower bound on the exact optimum.  Deterministic for a given seed.
CutResult local_search_bisection(const SignedGraph& g,
                                 const std::optional<std::pair<VertexSet, VertexSet>>& constraint,
                                 const LocalSearchParams& params, std::uint64_t seed);

// Single-vertex-flip annealing over all partitions (no balance), for max cut only.
CutResult local_search_max_cut(const SignedGraph& g, const LocalSearchParams& params,
                               std::uint64_t seed);

using GraphParameter = std::function<double(const MultiGraph&)>;

// (n x n) symmetric matrix of f(G + ij) - f(G), diagonal = loop additions.
std::vector<std::vector<double>> delta_matrix(const GraphParameter& f, const MultiGraph& g,
                                              const ExactGuards& guards = {});

struct ParameterPropertyReport {
  bool additive = false;   // f(G) equals the sum over connected components
  bool lipschitz = false;  // all |delta| <= 1
  bool concave = false;    // centered delta matrix negative semidefinite
  int components = 0;
  double max_abs_delta = 0.0;
  double max_quadratic_form = 0.0;   // max x'Dx / x'x over sampled zero-sum x
  double max_centered_eigenvalue = 0.0;
  std::string witness;  // set when some property fails
};

// Concavity is probed on zero_sum_samples random zero-sum vectors and settled by the
// eigen-decomposition of the doubly centered delta matrix.
ParameterPropertyReport check_parameter_properties(const GraphParameter& f, const MultiGraph& g,
                                                   int zero_sum_samples = 200,
                                                   std::uint64_t seed = 0x7265706f7274ULL,
                                                   const ExactGuards& guards = {});

namespace detail {

// Side-2 bitmasks (bit v-1 set <=> vertex v on side 2) of all canonical partitions for
// each family; vertex 1 is always on side 1. Shared by the hybrid expectations so the
// mask set is built once per graph instead of once per labeling.
std::vector<std::uint32_t> balanced_side2_masks(int n);
std::vector<std::uint32_t> constrained_side2_masks(int n, const VertexSet& A, const VertexSet& B);

long long best_signed_value(const std::vector<std::uint32_t>& masks, const MultiGraph& g,
                            const std::vector<int>& labels);

}  // namespace detail

}  // namespace bisect
