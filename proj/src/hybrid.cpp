#include "bisect/hybrid.hpp"

#include <algorithm>
#include <bit>
#include <climits>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "bisect/errors.hpp"
#include "bisect/parallel.hpp"
#include "bisect/rng.hpp"

namespace bisect {

namespace {

void validate_p(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("p must lie in [0,1]");
}

// Distinct cut patterns over the graph's edges, one bit per edge, across the given
// partition masks.  The best signed value of a labeling only depends on these.
std::vector<std::uint32_t> cut_patterns(const MultiGraph& g,
                                        const std::vector<std::uint32_t>& masks) {
  std::vector<std::uint32_t> patterns;
  patterns.reserve(masks.size());
  for (std::uint32_t m : masks) {
    std::uint32_t c = 0;
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
      const auto& [u, v] = g.edges[e];
      if (u == v) continue;
      if (((m >> (u - 1)) ^ (m >> (v - 1))) & 1u) c |= 1u << e;
    }
    patterns.push_back(c);
  }
  std::sort(patterns.begin(), patterns.end());
  patterns.erase(std::unique(patterns.begin(), patterns.end()), patterns.end());
  return patterns;
}

HybridEstimate exact_over_masks(const MultiGraph& g, double p,
                                const std::vector<std::uint32_t>& masks, int max_edges) {
  validate_p(p);
  const int e = g.edge_count();
  if (e > max_edges)
    throw guard_error("exact labeling enumeration limited to " + std::to_string(max_edges) +
                      " edges (got " + std::to_string(e) + ")");
  const std::vector<std::uint32_t> patterns = cut_patterns(g, masks);

  std::vector<double> ppow(static_cast<std::size_t>(e) + 1, 1.0);
  std::vector<double> qpow(static_cast<std::size_t>(e) + 1, 1.0);
  for (int k = 1; k <= e; ++k) {
    ppow[static_cast<std::size_t>(k)] = ppow[static_cast<std::size_t>(k - 1)] * p;
    qpow[static_cast<std::size_t>(k)] = qpow[static_cast<std::size_t>(k - 1)] * (1.0 - p);
  }

  double total = 0.0;
  const std::uint32_t top = e == 0 ? 1u : 1u << e;
  for (std::uint32_t omega = 0; omega < top; ++omega) {
    const int plus = std::popcount(omega);
    const double w = ppow[static_cast<std::size_t>(plus)] *
                     qpow[static_cast<std::size_t>(e - plus)];
    if (w == 0.0) continue;
    // Signed value of pattern c under labeling omega: (# +1 cut) - (# -1 cut).
    int best = INT_MIN;
    for (std::uint32_t c : patterns) {
      const int v = 2 * std::popcount(c & omega) - std::popcount(c);
      best = std::max(best, v);
    }
    total += w * best;
  }
  return {total, 0.0, static_cast<long long>(top), EstimateMode::exact, false};
}

HybridEstimate mc_over_graph(const MultiGraph& g, double p, long long samples,
                             std::uint64_t seed, const McOptions& opts,
                             const std::optional<std::pair<VertexSet, VertexSet>>& constraint) {
  validate_p(p);
  if (samples < 2) throw std::invalid_argument("need at least two samples");
  std::vector<double> values(static_cast<std::size_t>(samples));
  parallel_for(static_cast<std::size_t>(samples), opts.threads, [&](std::size_t i) {
    const SignedGraph sg = sample_labeling(g, p, derive_seed(seed, i, 0x1abe1));
    if (opts.solver == SolverKind::exact) {
      values[i] = static_cast<double>(
          constraint ? constrained_max_bisection(sg, constraint->first, constraint->second).value
                     : signed_max_bisection(sg).value);
    } else {
      values[i] = static_cast<double>(
          local_search_bisection(sg, constraint, opts.search, derive_seed(seed, i, 0x5ea2c4))
              .value);
    }
  });
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(samples);
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double stderror =
      std::sqrt(ss / static_cast<double>(samples - 1)) / std::sqrt(static_cast<double>(samples));
  return {mean, stderror, samples, EstimateMode::monte_carlo,
          opts.solver == SolverKind::heuristic};
}

}  // namespace

SignedGraph sample_labeling(const MultiGraph& g, double p, std::uint64_t seed) {
  validate_p(p);
  Rng rng(seed);
  std::vector<int> labels(g.edges.size());
  for (auto& l : labels) l = rng.bernoulli(p) ? 1 : -1;
  return {g, std::move(labels)};
}

HybridEstimate hybrid_exact(const MultiGraph& g, double p, int max_edges) {
  return exact_over_masks(g, p, detail::balanced_side2_masks(g.n), max_edges);
}

HybridEstimate constrained_hybrid_exact(const MultiGraph& g, const VertexSet& A,
                                        const VertexSet& B, double p, int max_edges) {
  return exact_over_masks(g, p, detail::constrained_side2_masks(g.n, A, B), max_edges);
}

HybridEstimate hybrid_mc(const MultiGraph& g, double p, long long samples, std::uint64_t seed,
                         const McOptions& opts) {
  return mc_over_graph(g, p, samples, seed, opts, std::nullopt);
}

HybridEstimate constrained_hybrid_mc(const MultiGraph& g, const VertexSet& A, const VertexSet& B,
                                     double p, long long samples, std::uint64_t seed,
                                     const McOptions& opts) {
  return mc_over_graph(g, p, samples, seed, opts, std::make_pair(A, B));
}

}  // namespace bisect
