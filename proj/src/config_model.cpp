#include "bisect/config_model.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "bisect/errors.hpp"
#include "bisect/rng.hpp"

namespace bisect {

namespace {

void validate_half_edge(const DegreeSequence& d, const HalfEdge& h) {
  if (h.vertex < 1 || h.vertex > d.size())
    throw std::invalid_argument("half-edge vertex out of range");
  if (h.copy < 1 || h.copy > d.degree(h.vertex))
    throw std::invalid_argument("half-edge copy exceeds vertex degree");
}

// 0 = A, 1 = B membership per vertex (1-based index).
std::vector<char> side_of_vertex(int n, const VertexSet& A, const VertexSet& B) {
  validate_partition(n, A, B);
  std::vector<char> side(static_cast<std::size_t>(n) + 1, 0);
  for (int v : B) side[static_cast<std::size_t>(v)] = 1;
  return side;
}

}  // namespace

void validate_partition(int n, const VertexSet& A, const VertexSet& B) {
  std::vector<char> seen(static_cast<std::size_t>(n) + 1, 0);
  auto absorb = [&](const VertexSet& S, const char* name) {
    int prev = 0;
    for (int v : S) {
      if (v < 1 || v > n) throw std::invalid_argument(std::string(name) + ": vertex out of range");
      if (v <= prev) throw std::invalid_argument(std::string(name) + ": must be sorted and distinct");
      if (seen[static_cast<std::size_t>(v)])
        throw std::invalid_argument("A and B must be disjoint");
      seen[static_cast<std::size_t>(v)] = 1;
      prev = v;
    }
  };
  absorb(A, "A");
  absorb(B, "B");
  if (static_cast<int>(A.size() + B.size()) != n)
    throw std::invalid_argument("A and B must cover all vertices");
}

Matching Matching::from_pairs(DegreeSequence base, std::vector<HalfEdgePair> pairs) {
  std::vector<HalfEdge> used;
  used.reserve(pairs.size() * 2);
  for (auto& [x, y] : pairs) {
    validate_half_edge(base, x);
    validate_half_edge(base, y);
    if (x == y) throw std::invalid_argument("a half-edge cannot be matched to itself");
    if (y < x) std::swap(x, y);
    used.push_back(x);
    used.push_back(y);
  }
  std::sort(used.begin(), used.end());
  if (std::adjacent_find(used.begin(), used.end()) != used.end())
    throw std::invalid_argument("half-edge appears in more than one pair");
  std::sort(pairs.begin(), pairs.end());
  return Matching(std::move(base), std::move(pairs));
}

std::vector<HalfEdge> Matching::unmatched() const {
  std::vector<HalfEdge> all = build_half_edges(base_);
  std::vector<HalfEdge> used;
  used.reserve(pairs_.size() * 2);
  for (const auto& [x, y] : pairs_) {
    used.push_back(x);
    used.push_back(y);
  }
  std::sort(used.begin(), used.end());
  std::vector<HalfEdge> out;
  std::set_difference(all.begin(), all.end(), used.begin(), used.end(),
                      std::back_inserter(out));
  return out;
}

std::vector<HalfEdge> build_half_edges(const DegreeSequence& d) {
  std::vector<HalfEdge> out;
  out.reserve(static_cast<std::size_t>(d.total()));
  for (int v = 1; v <= d.size(); ++v)
    for (int c = 1; c <= d.degree(v); ++c) out.push_back({v, c});
  return out;
}

namespace {

Matching sample_matching_impl(const DegreeSequence& d, std::uint64_t seed, bool require_even) {
  if (require_even && d.total() % 2 != 0)
    throw parity_error("total degree is odd; no complete matching exists");
  std::vector<HalfEdge> pool = build_half_edges(d);
  std::vector<HalfEdgePair> pairs;
  pairs.reserve(pool.size() / 2);
  Rng rng(seed);
  // Pair the first remaining half-edge with a uniform other one; this yields a
  // uniform complete (or maximum, for odd totals) matching.
  while (pool.size() >= 2) {
    const HalfEdge anchor = pool.front();
    pool.erase(pool.begin());
    const std::size_t j = rng.below(pool.size());
    pairs.emplace_back(anchor, pool[j]);
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(j));
  }
  return Matching::from_pairs(d, std::move(pairs));
}

}  // namespace

Matching sample_complete_matching(const DegreeSequence& d, std::uint64_t seed) {
  return sample_matching_impl(d, seed, true);
}

Matching sample_maximum_matching(const DegreeSequence& d, std::uint64_t seed) {
  return sample_matching_impl(d, seed, false);
}

MultiGraph graph_of_matching(const Matching& m) {
  MultiGraph g;
  g.n = m.base().size();
  g.edges.reserve(m.pairs().size());
  for (const auto& [x, y] : m.pairs())
    g.edges.emplace_back(std::min(x.vertex, y.vertex), std::max(x.vertex, y.vertex));
  return g;
}

EdgeTypeCounts classify_matching(const Matching& m, const VertexSet& A, const VertexSet& B) {
  const std::vector<char> side = side_of_vertex(m.base().size(), A, B);
  EdgeTypeCounts t;
  for (const auto& [x, y] : m.pairs()) {
    const char sx = side[static_cast<std::size_t>(x.vertex)];
    const char sy = side[static_cast<std::size_t>(y.vertex)];
    if (sx == 0 && sy == 0)
      ++t.alpha;
    else if (sx == 1 && sy == 1)
      ++t.beta;
    else
      ++t.gamma;
  }
  return t;
}

bool is_feasible(const DegreeSequence& d, const VertexSet& A, const VertexSet& B,
                 const EdgeTypeCounts& t) {
  validate_partition(d.size(), A, B);
  if (t.alpha < 0 || t.beta < 0 || t.gamma < 0)
    throw std::invalid_argument("edge-type counts must be nonnegative");
  long long dA = 0, dB = 0;
  for (int v : A) dA += d.degree(v);
  for (int v : B) dB += d.degree(v);
  return 2 * t.alpha + t.gamma <= dA && 2 * t.beta + t.gamma <= dB;
}

namespace {

struct MatchingVisitor {
  std::span<const HalfEdge> hes;
  std::span<const char> he_side;  // 0 = A, 1 = B per half-edge; empty if no filter
  const EdgeTypeCounts* target = nullptr;
  bool complete_only = false;
  int shard = -1;  // >= 0: only take root branch `shard` (0 = unmatched, j = pair with j)
  const std::function<void(std::span<const HalfEdgePair>)>* fn = nullptr;

  std::vector<char> used;
  std::vector<HalfEdgePair> pairs;
  EdgeTypeCounts counts;

  void run() {
    used.assign(hes.size(), 0);
    pairs.reserve(hes.size() / 2);
    rec(0);
  }

  void rec(std::size_t from) {
    std::size_t i = from;
    while (i < hes.size() && used[i]) ++i;
    if (i == hes.size()) {
      if (target == nullptr || counts == *target) (*fn)(pairs);
      return;
    }
    const bool root = from == 0;
    used[i] = 1;
    if (!complete_only && (!root || shard < 0 || shard == 0))
      rec(i + 1);  // leave hes[i] permanently unmatched
    for (std::size_t j = i + 1; j < hes.size(); ++j) {
      if (used[j]) continue;
      if (root && shard >= 0 && static_cast<std::size_t>(shard) != j) continue;
      long long* bucket = nullptr;
      if (target != nullptr) {
        if (he_side[i] == 0 && he_side[j] == 0)
          bucket = &counts.alpha;
        else if (he_side[i] == 1 && he_side[j] == 1)
          bucket = &counts.beta;
        else
          bucket = &counts.gamma;
        ++*bucket;
        const bool over = counts.alpha > target->alpha || counts.beta > target->beta ||
                          counts.gamma > target->gamma;
        if (over) {
          --*bucket;
          continue;
        }
      }
      used[j] = 1;
      pairs.emplace_back(hes[i], hes[j]);
      rec(i + 1);
      pairs.pop_back();
      used[j] = 0;
      if (bucket != nullptr) --*bucket;
    }
    used[i] = 0;
  }
};

}  // namespace

void visit_matchings(const DegreeSequence& d, bool complete_only,
                     const std::function<void(std::span<const HalfEdgePair>)>& fn,
                     int max_half_edges) {
  if (d.total() > max_half_edges)
    throw guard_error("matching enumeration limited to " + std::to_string(max_half_edges) +
                      " half-edges (got " + std::to_string(d.total()) + ")");
  const std::vector<HalfEdge> hes = build_half_edges(d);
  MatchingVisitor v;
  v.hes = hes;
  v.complete_only = complete_only;
  v.fn = &fn;
  v.run();
}

void visit_matchings_shard(const DegreeSequence& d, bool complete_only, int shard,
                           const std::function<void(std::span<const HalfEdgePair>)>& fn,
                           int max_half_edges) {
  if (d.total() > max_half_edges)
    throw guard_error("matching enumeration limited to " + std::to_string(max_half_edges) +
                      " half-edges (got " + std::to_string(d.total()) + ")");
  if (shard < 0 || shard >= d.total())
    throw std::invalid_argument("shard index out of range");
  const std::vector<HalfEdge> hes = build_half_edges(d);
  MatchingVisitor v;
  v.hes = hes;
  v.complete_only = complete_only;
  v.shard = shard;
  v.fn = &fn;
  v.run();
}

void visit_class(const DegreeSequence& d, const VertexSet& A, const VertexSet& B,
                 const EdgeTypeCounts& t,
                 const std::function<void(std::span<const HalfEdgePair>)>& fn,
                 int max_half_edges) {
  if (d.total() > max_half_edges)
    throw guard_error("class enumeration limited to " + std::to_string(max_half_edges) +
                      " half-edges (got " + std::to_string(d.total()) + ")");
  if (!is_feasible(d, A, B, t)) return;
  const std::vector<char> vside = side_of_vertex(d.size(), A, B);
  const std::vector<HalfEdge> hes = build_half_edges(d);
  std::vector<char> hside(hes.size());
  for (std::size_t i = 0; i < hes.size(); ++i)
    hside[i] = vside[static_cast<std::size_t>(hes[i].vertex)];

  MatchingVisitor v;
  v.hes = hes;
  v.he_side = hside;
  v.target = &t;
  v.fn = &fn;
  v.run();
}

std::vector<Matching> enumerate_class(const DegreeSequence& d, const VertexSet& A,
                                      const VertexSet& B, const EdgeTypeCounts& t,
                                      int max_half_edges) {
  std::vector<Matching> out;
  visit_class(
      d, A, B, t,
      [&](std::span<const HalfEdgePair> pairs) {
        out.push_back(Matching::from_pairs(d, {pairs.begin(), pairs.end()}));
      },
      max_half_edges);
  return out;
}

Matching sample_in_class(const DegreeSequence& d, const VertexSet& A, const VertexSet& B,
                         const EdgeTypeCounts& t, std::uint64_t seed) {
  if (!is_feasible(d, A, B, t))
    throw feasibility_error("edge-type counts are infeasible for this split");
  const std::vector<char> vside = side_of_vertex(d.size(), A, B);
  std::vector<HalfEdge> poolA, poolB;
  for (const HalfEdge& h : build_half_edges(d))
    (vside[static_cast<std::size_t>(h.vertex)] == 0 ? poolA : poolB).push_back(h);

  Rng rng(seed);
  auto take = [&rng](std::vector<HalfEdge>& pool) {
    const std::size_t j = rng.below(pool.size());
    const HalfEdge h = pool[j];
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(j));
    return h;
  };

  // Adding a uniform edge of a fixed type to a uniform member of a class keeps the
  // matching uniform in the grown class, so any fixed type order works.
  std::vector<HalfEdgePair> pairs;
  pairs.reserve(static_cast<std::size_t>(t.alpha + t.beta + t.gamma));
  for (long long i = 0; i < t.alpha; ++i) pairs.emplace_back(take(poolA), take(poolA));
  for (long long i = 0; i < t.beta; ++i) pairs.emplace_back(take(poolB), take(poolB));
  for (long long i = 0; i < t.gamma; ++i) pairs.emplace_back(take(poolA), take(poolB));
  return Matching::from_pairs(d, std::move(pairs));
}

}  // namespace bisect
