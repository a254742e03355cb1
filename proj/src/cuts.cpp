#include "bisect/cuts.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "bisect/errors.hpp"
#include "bisect/rng.hpp"

namespace bisect {

namespace {

void validate_signed(const SignedGraph& g) {
  if (g.graph.n < 1) throw std::invalid_argument("graph needs at least one vertex");
  if (g.labels.size() != g.graph.edges.size())
    throw std::invalid_argument("one label per edge required");
  for (int l : g.labels)
    if (l != 1 && l != -1) throw std::invalid_argument("labels must be +1 or -1");
  for (auto& [u, v] : g.graph.edges)
    if (u < 1 || v < 1 || u > g.graph.n || v > g.graph.n)
      throw std::invalid_argument("edge endpoint out of range");
}

void check_guard(int n, int guard, const char* what) {
  if (n > guard)
    throw guard_error(std::string(what) + " limited to n <= " + std::to_string(guard) +
                      " (got n = " + std::to_string(n) + ")");
}

long long value_of_mask(const MultiGraph& g, const std::vector<int>& labels, std::uint32_t mask) {
  long long v = 0;
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    const auto& [a, b] = g.edges[e];
    if (a == b) continue;
    if (((mask >> (a - 1)) ^ (mask >> (b - 1))) & 1u) v += labels[e];
  }
  return v;
}

// k-subsets of `positions` as full-width side-2 masks (Gosper over compact bits).
void for_each_scattered_subset(const std::vector<int>& positions, int k,
                               const std::function<void(std::uint32_t)>& fn) {
  const int m = static_cast<int>(positions.size());
  if (k < 0 || k > m) return;
  if (k == 0) {
    fn(0);
    return;
  }
  std::uint32_t compact = (1u << k) - 1;
  const std::uint32_t top = 1u << m;
  while (compact < top) {
    std::uint32_t full = 0;
    std::uint32_t bits = compact;
    while (bits != 0) {
      const int j = std::countr_zero(bits);
      bits &= bits - 1;
      full |= 1u << positions[static_cast<std::size_t>(j)];
    }
    fn(full);
    const std::uint32_t c = compact & (0u - compact);
    const std::uint32_t r = compact + c;
    compact = (((r ^ compact) >> 2) / c) | r;
  }
}

std::vector<int> balanced_sizes(int n) {
  if (n % 2 == 0) return {n / 2};
  return {n / 2, n / 2 + 1};
}

struct EnumeratedSolve {
  long long best = 0;
  std::uint32_t best_mask = 0;
  long long optima = 0;
  bool any = false;
  std::vector<std::uint32_t> all_best;  // filled only when collecting

  void offer(long long v, std::uint32_t mask, bool maximize, bool collect) {
    const bool better = !any || (maximize ? v > best : v < best);
    if (better) {
      best = v;
      best_mask = mask;
      optima = 1;
      any = true;
      if (collect) {
        all_best.clear();
        all_best.push_back(mask);
      }
      return;
    }
    if (v == best) {
      ++optima;
      if (collect) all_best.push_back(mask);
    }
  }
};

Bisection bisection_of_mask(int n, std::uint32_t mask) {
  std::vector<int> sides(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) sides[static_cast<std::size_t>(v)] = ((mask >> v) & 1u) ? 2 : 1;
  return Bisection(std::move(sides));
}

}  // namespace

SignedGraph all_plus(const MultiGraph& g) {
  return {g, std::vector<int>(g.edges.size(), 1)};
}

SignedGraph all_minus(const MultiGraph& g) {
  return {g, std::vector<int>(g.edges.size(), -1)};
}

Bisection::Bisection(std::vector<int> sides) : sides_(std::move(sides)) {
  if (sides_.empty()) throw std::invalid_argument("bisection needs at least one vertex");
  for (int s : sides_)
    if (s != 1 && s != 2) throw std::invalid_argument("sides must be 1 or 2");
  if (sides_.front() == 2)
    for (int& s : sides_) s = 3 - s;
}

int Bisection::side_count(int which) const {
  return static_cast<int>(std::count(sides_.begin(), sides_.end(), which));
}

bool Bisection::balanced() const { return std::abs(side_count(1) - side_count(2)) <= 1; }

long long signed_cut_value(const SignedGraph& g, const Bisection& b) {
  validate_signed(g);
  if (b.n() != g.graph.n) throw std::invalid_argument("bisection size mismatch");
  long long v = 0;
  for (std::size_t e = 0; e < g.graph.edges.size(); ++e) {
    const auto& [a, c] = g.graph.edges[e];
    if (a == c) continue;
    if (b.side(a) != b.side(c)) v += g.labels[e];
  }
  return v;
}

namespace detail {

std::vector<std::uint32_t> balanced_side2_masks(int n) {
  std::vector<std::uint32_t> masks;
  std::vector<int> rest(static_cast<std::size_t>(n - 1));
  std::iota(rest.begin(), rest.end(), 1);  // bit positions of vertices 2..n
  for (int size2 : balanced_sizes(n))
    for_each_scattered_subset(rest, size2, [&](std::uint32_t m) { masks.push_back(m); });
  return masks;
}

std::vector<std::uint32_t> constrained_side2_masks(int n, const VertexSet& A,
                                                   const VertexSet& B) {
  validate_partition(n, A, B);
  // Vertex 1 stays on side 1, so its bit position is excluded from its own set.
  std::vector<int> posA, posB;
  for (int v : A)
    if (v != 1) posA.push_back(v - 1);
  for (int v : B)
    if (v != 1) posB.push_back(v - 1);

  const std::vector<int> sizesA = balanced_sizes(static_cast<int>(A.size()));
  const std::vector<int> sizesB = balanced_sizes(static_cast<int>(B.size()));
  const std::vector<int> total = balanced_sizes(n);

  std::vector<std::uint32_t> masks;
  for (int ka : sizesA) {
    std::vector<std::uint32_t> partA;
    for_each_scattered_subset(posA, ka, [&](std::uint32_t m) { partA.push_back(m); });
    for (int kb : sizesB) {
      if (std::find(total.begin(), total.end(), ka + kb) == total.end()) continue;
      for (std::uint32_t ma : partA)
        for_each_scattered_subset(posB, kb,
                                  [&](std::uint32_t mb) { masks.push_back(ma | mb); });
    }
  }
  return masks;
}

long long best_signed_value(const std::vector<std::uint32_t>& masks, const MultiGraph& g,
                            const std::vector<int>& labels) {
  long long best = 0;
  bool any = false;
  for (std::uint32_t m : masks) {
    const long long v = value_of_mask(g, labels, m);
    if (!any || v > best) {
      best = v;
      any = true;
    }
  }
  if (!any) throw std::logic_error("empty partition family");
  return best;
}

}  // namespace detail

namespace {

CutResult solve_over_masks(const SignedGraph& g, const std::vector<std::uint32_t>& masks,
                           bool maximize) {
  EnumeratedSolve s;
  for (std::uint32_t m : masks)
    s.offer(value_of_mask(g.graph, g.labels, m), m, maximize, false);
  if (!s.any) throw std::logic_error("no feasible partition");
  CutResult r{s.best, bisection_of_mask(g.graph.n, s.best_mask), s.optima};
  return r;
}

}  // namespace

CutResult max_cut(const MultiGraph& g, const ExactGuards& guards) {
  const SignedGraph sg = all_plus(g);
  validate_signed(sg);
  check_guard(g.n, guards.solve_n, "max_cut");
  EnumeratedSolve s;
  const std::uint32_t top = g.n == 1 ? 1u : 1u << (g.n - 1);
  for (std::uint32_t half = 0; half < top; ++half)
    s.offer(value_of_mask(g, sg.labels, half << 1), half << 1, true, false);
  return {s.best, bisection_of_mask(g.n, s.best_mask), s.optima};
}

CutResult min_bisection(const MultiGraph& g, const ExactGuards& guards) {
  const SignedGraph sg = all_plus(g);
  validate_signed(sg);
  check_guard(g.n, guards.solve_n, "min_bisection");
  return solve_over_masks(sg, detail::balanced_side2_masks(g.n), false);
}

CutResult signed_max_bisection(const SignedGraph& g, const ExactGuards& guards) {
  validate_signed(g);
  check_guard(g.graph.n, guards.solve_n, "signed_max_bisection");
  return solve_over_masks(g, detail::balanced_side2_masks(g.graph.n), true);
}

CutResult constrained_max_bisection(const SignedGraph& g, const VertexSet& A,
                                    const VertexSet& B, const ExactGuards& guards) {
  validate_signed(g);
  check_guard(g.graph.n, guards.solve_n, "constrained_max_bisection");
  return solve_over_masks(g, detail::constrained_side2_masks(g.graph.n, A, B), true);
}

std::vector<Bisection> enumerate_optimal_constrained(const SignedGraph& g, const VertexSet& A,
                                                     const VertexSet& B,
                                                     const ExactGuards& guards) {
  validate_signed(g);
  check_guard(g.graph.n, guards.enumerate_n, "enumerate_optimal_constrained");
  EnumeratedSolve s;
  for (std::uint32_t m : detail::constrained_side2_masks(g.graph.n, A, B))
    s.offer(value_of_mask(g.graph, g.labels, m), m, true, true);
  if (!s.any) throw std::logic_error("no feasible constrained bisection");
  std::vector<Bisection> out;
  out.reserve(s.all_best.size());
  for (std::uint32_t m : s.all_best) out.push_back(bisection_of_mask(g.graph.n, m));
  return out;
}

CutResult alpha_cut(const SignedGraph& g, double ratio, CutSense sense,
                    const ExactGuards& guards) {
  validate_signed(g);
  if (!(ratio > 0.0 && ratio < 1.0)) throw std::invalid_argument("ratio must lie in (0,1)");
  check_guard(g.graph.n, guards.solve_n, "alpha_cut");
  const int n = g.graph.n;
  const int lo = static_cast<int>(std::floor(ratio * n));
  const int hi = static_cast<int>(std::ceil(ratio * n));
  // One side must have size lo or hi; with vertex 1 pinned to side 1, side 2 may take
  // either the small or the complementary size.
  std::vector<int> sizes = {lo, hi, n - lo, n - hi};
  std::sort(sizes.begin(), sizes.end());
  sizes.erase(std::unique(sizes.begin(), sizes.end()), sizes.end());

  std::vector<int> rest(static_cast<std::size_t>(n - 1));
  std::iota(rest.begin(), rest.end(), 1);
  EnumeratedSolve s;
  for (int k : sizes) {
    if (k < 0 || k > n - 1) continue;  // side 2 excludes vertex 1
    for_each_scattered_subset(rest, k, [&](std::uint32_t m) {
      s.offer(value_of_mask(g.graph, g.labels, m), m, sense == CutSense::maximize, false);
    });
  }
  if (!s.any) throw std::logic_error("no partition with the requested side sizes");
  return {s.best, bisection_of_mask(n, s.best_mask), s.optima};
}

namespace {

struct Adjacency {
  // Per vertex: (neighbor, label) with parallel edges repeated; loops dropped.
  std::vector<std::vector<std::pair<int, int>>> at;
  int max_degree = 0;

  explicit Adjacency(const SignedGraph& g) : at(static_cast<std::size_t>(g.graph.n) + 1) {
    for (std::size_t e = 0; e < g.graph.edges.size(); ++e) {
      const auto& [u, v] = g.graph.edges[e];
      if (u == v) continue;
      at[static_cast<std::size_t>(u)].emplace_back(v, g.labels[e]);
      at[static_cast<std::size_t>(v)].emplace_back(u, g.labels[e]);
    }
    for (const auto& row : at) max_degree = std::max(max_degree, static_cast<int>(row.size()));
  }

  // Change in cut value if `v` alone switched sides.
  long long flip_gain(const std::vector<int>& side, int v) const {
    long long g = 0;
    for (const auto& [w, l] : at[static_cast<std::size_t>(v)])
      g += (side[static_cast<std::size_t>(w)] == side[static_cast<std::size_t>(v)]) ? l : -l;
    return g;
  }
};

struct AnnealState {
  std::vector<int> side;  // 1-based; side[0] unused
  long long value = 0;
};

long long swap_gain(const Adjacency& adj, const std::vector<int>& side, int v, int w) {
  long long g = adj.flip_gain(side, v) + adj.flip_gain(side, w);
  // Edges between v and w never change crossing status when both endpoints move,
  // yet each flip gain counts them once; cancel the two phantom contributions.
  for (const auto& [x, l] : adj.at[static_cast<std::size_t>(v)])
    if (x == w) g += (side[static_cast<std::size_t>(v)] == side[static_cast<std::size_t>(w)]) ? -2 * l : 2 * l;
  return g;
}

}  // namespace

CutResult local_search_bisection(const SignedGraph& g,
                                 const std::optional<std::pair<VertexSet, VertexSet>>& constraint,
                                 const LocalSearchParams& params, std::uint64_t seed) {
  validate_signed(g);
  const int n = g.graph.n;
  if (constraint) validate_partition(n, constraint->first, constraint->second);
  if (params.restarts < 1 || params.sweeps < 1)
    throw std::invalid_argument("restarts and sweeps must be positive");
  const Adjacency adj(g);
  const double t0 = params.initial_temperature > 0.0 ? params.initial_temperature
                                                     : std::max(1, 2 * adj.max_degree);

  // Groups to keep balanced: whole vertex set, or A and B separately.
  std::vector<VertexSet> groups;
  if (constraint) {
    if (!constraint->first.empty()) groups.push_back(constraint->first);
    if (!constraint->second.empty()) groups.push_back(constraint->second);
  } else {
    VertexSet all(static_cast<std::size_t>(n));
    std::iota(all.begin(), all.end(), 1);
    groups.push_back(all);
  }
  // With |A| and |B| both odd their unit imbalances must cancel; cross-side A/B pair
  // swaps toggle which group carries its extra vertex on side 1.
  const bool cross_moves = groups.size() == 2 && groups[0].size() % 2 == 1 &&
                           groups[1].size() % 2 == 1;
  auto in_range = [](std::size_t group_size, int on_side2) {
    const int half = static_cast<int>(group_size) / 2;
    if (group_size % 2 == 0) return on_side2 == half;
    return on_side2 == half || on_side2 == half + 1;
  };

  std::optional<CutResult> best;
  for (int restart = 0; restart < params.restarts; ++restart) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(restart), 0xb15ec7));
    AnnealState st;
    st.side.assign(static_cast<std::size_t>(n) + 1, 1);
    // Balanced random start per group.  When two groups are odd the second one puts
    // its extra vertex on side 2 so the overall split stays balanced.
    std::vector<int> on_side2(groups.size(), 0);
    bool extra_placed = false;
    for (std::size_t gi = 0; gi < groups.size(); ++gi) {
      const VertexSet& grp = groups[gi];
      VertexSet shuffled = grp;
      for (std::size_t i = shuffled.size(); i > 1; --i)
        std::swap(shuffled[i - 1], shuffled[rng.below(i)]);
      std::size_t half = shuffled.size() / 2;
      if (shuffled.size() % 2 == 1 && extra_placed) ++half;
      if (shuffled.size() % 2 == 1) extra_placed = true;
      on_side2[gi] = static_cast<int>(half);
      for (std::size_t i = 0; i < half; ++i)
        st.side[static_cast<std::size_t>(shuffled[i])] = 2;
    }
    {
      std::vector<int> sides(st.side.begin() + 1, st.side.end());
      st.value = signed_cut_value(g, Bisection(std::move(sides)));
    }

    long long best_value = st.value;
    std::vector<int> best_side = st.side;
    double temp = t0;
    for (int sweep = 0; sweep < params.sweeps; ++sweep) {
      for (int step = 0; step < n; ++step) {
        int v = 0, w = 0;
        int d2_first = 0;  // change to on_side2[0] if the move is a cross swap
        const int move_kinds = static_cast<int>(groups.size()) + (cross_moves ? 1 : 0);
        const int kind = rng.index(move_kinds);
        if (kind < static_cast<int>(groups.size())) {
          const VertexSet& grp = groups[static_cast<std::size_t>(kind)];
          if (grp.size() < 2) continue;
          v = grp[static_cast<std::size_t>(rng.index(static_cast<int>(grp.size())))];
          w = grp[static_cast<std::size_t>(rng.index(static_cast<int>(grp.size())))];
          if (v == w || st.side[static_cast<std::size_t>(v)] == st.side[static_cast<std::size_t>(w)])
            continue;
        } else {
          v = groups[0][static_cast<std::size_t>(rng.index(static_cast<int>(groups[0].size())))];
          w = groups[1][static_cast<std::size_t>(rng.index(static_cast<int>(groups[1].size())))];
          if (st.side[static_cast<std::size_t>(v)] == st.side[static_cast<std::size_t>(w)])
            continue;
          d2_first = st.side[static_cast<std::size_t>(v)] == 1 ? 1 : -1;
          if (!in_range(groups[0].size(), on_side2[0] + d2_first) ||
              !in_range(groups[1].size(), on_side2[1] - d2_first))
            continue;
        }
        const long long gain = swap_gain(adj, st.side, v, w);
        if (gain >= 0 || rng.real01() < std::exp(static_cast<double>(gain) / temp)) {
          st.side[static_cast<std::size_t>(v)] = 3 - st.side[static_cast<std::size_t>(v)];
          st.side[static_cast<std::size_t>(w)] = 3 - st.side[static_cast<std::size_t>(w)];
          st.value += gain;
          if (d2_first != 0) {
            on_side2[0] += d2_first;
            on_side2[1] -= d2_first;
          }
          if (st.value > best_value) {
            best_value = st.value;
            best_side = st.side;
          }
        }
      }
      temp *= params.cooling;
    }
    if (!best || best_value > best->value) {
      std::vector<int> sides(best_side.begin() + 1, best_side.end());
      best = CutResult{best_value, Bisection(std::move(sides)), std::nullopt};
    }
  }
  return *best;
}

CutResult local_search_max_cut(const SignedGraph& g, const LocalSearchParams& params,
                               std::uint64_t seed) {
  validate_signed(g);
  const int n = g.graph.n;
  if (params.restarts < 1 || params.sweeps < 1)
    throw std::invalid_argument("restarts and sweeps must be positive");
  const Adjacency adj(g);
  const double t0 = params.initial_temperature > 0.0 ? params.initial_temperature
                                                     : std::max(1, 2 * adj.max_degree);
  std::optional<CutResult> best;
  for (int restart = 0; restart < params.restarts; ++restart) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(restart), 0x3a7c));
    std::vector<int> side(static_cast<std::size_t>(n) + 1);
    for (int v = 1; v <= n; ++v) side[static_cast<std::size_t>(v)] = 1 + rng.index(2);
    long long value;
    {
      std::vector<int> sides(side.begin() + 1, side.end());
      value = signed_cut_value(g, Bisection(std::move(sides)));
    }
    long long best_value = value;
    std::vector<int> best_side = side;
    double temp = t0;
    for (int sweep = 0; sweep < params.sweeps; ++sweep) {
      for (int step = 0; step < n; ++step) {
        const int v = 1 + rng.index(n);
        const long long gain = adj.flip_gain(side, v);
        if (gain >= 0 || rng.real01() < std::exp(static_cast<double>(gain) / temp)) {
          side[static_cast<std::size_t>(v)] = 3 - side[static_cast<std::size_t>(v)];
          value += gain;
          if (value > best_value) {
            best_value = value;
            best_side = side;
          }
        }
      }
      temp *= params.cooling;
    }
    if (!best || best_value > best->value) {
      std::vector<int> sides(best_side.begin() + 1, best_side.end());
      best = CutResult{best_value, Bisection(std::move(sides)), std::nullopt};
    }
  }
  return *best;
}

std::vector<std::vector<double>> delta_matrix(const GraphParameter& f, const MultiGraph& g,
                                              const ExactGuards& guards) {
  if (g.n < 1) throw std::invalid_argument("graph needs at least one vertex");
  check_guard(g.n, guards.delta_n, "delta_matrix");
  const double base = f(g);
  std::vector<std::vector<double>> d(static_cast<std::size_t>(g.n),
                                     std::vector<double>(static_cast<std::size_t>(g.n), 0.0));
  for (int i = 1; i <= g.n; ++i)
    for (int j = i; j <= g.n; ++j) {
      MultiGraph grown = g;
      grown.edges.emplace_back(i, j);
      const double delta = f(grown) - base;
      d[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - 1)] = delta;
      d[static_cast<std::size_t>(j - 1)][static_cast<std::size_t>(i - 1)] = delta;
    }
  return d;
}

namespace {

std::vector<MultiGraph> connected_components(const MultiGraph& g) {
  std::vector<int> comp(static_cast<std::size_t>(g.n) + 1, 0);
  int next = 0;
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(g.n) + 1);
  for (auto& [u, v] : g.edges) {
    adj[static_cast<std::size_t>(u)].push_back(v);
    adj[static_cast<std::size_t>(v)].push_back(u);
  }
  for (int s = 1; s <= g.n; ++s) {
    if (comp[static_cast<std::size_t>(s)] != 0) continue;
    ++next;
    std::vector<int> stack = {s};
    comp[static_cast<std::size_t>(s)] = next;
    while (!stack.empty()) {
      const int v = stack.back();
      stack.pop_back();
      for (int w : adj[static_cast<std::size_t>(v)])
        if (comp[static_cast<std::size_t>(w)] == 0) {
          comp[static_cast<std::size_t>(w)] = next;
          stack.push_back(w);
        }
    }
  }
  std::vector<MultiGraph> parts(static_cast<std::size_t>(next));
  std::vector<int> local(static_cast<std::size_t>(g.n) + 1, 0);
  for (int v = 1; v <= g.n; ++v) {
    MultiGraph& part = parts[static_cast<std::size_t>(comp[static_cast<std::size_t>(v)] - 1)];
    local[static_cast<std::size_t>(v)] = ++part.n;
  }
  for (auto& [u, v] : g.edges) {
    MultiGraph& part = parts[static_cast<std::size_t>(comp[static_cast<std::size_t>(u)] - 1)];
    part.edges.emplace_back(std::min(local[static_cast<std::size_t>(u)], local[static_cast<std::size_t>(v)]),
                            std::max(local[static_cast<std::size_t>(u)], local[static_cast<std::size_t>(v)]));
  }
  return parts;
}

}  // namespace

ParameterPropertyReport check_parameter_properties(const GraphParameter& f, const MultiGraph& g,
                                                   int zero_sum_samples, std::uint64_t seed,
                                                   const ExactGuards& guards) {
  if (zero_sum_samples < 1) throw std::invalid_argument("need at least one probe vector");
  constexpr double kTol = 1e-9;
  ParameterPropertyReport rep;

  const std::vector<MultiGraph> parts = connected_components(g);
  rep.components = static_cast<int>(parts.size());
  rep.additive = true;
  if (parts.size() > 1) {
    double sum = 0.0;
    for (const MultiGraph& part : parts) sum += f(part);
    const double whole = f(g);
    if (std::abs(whole - sum) > kTol) {
      rep.additive = false;
      rep.witness = "f(G) = " + std::to_string(whole) + " but component sum = " +
                    std::to_string(sum);
    }
  }

  const auto delta = delta_matrix(f, g, guards);
  const int n = g.n;
  rep.lipschitz = true;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double a = std::abs(delta[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
      rep.max_abs_delta = std::max(rep.max_abs_delta, a);
      if (a > 1.0 + kTol && rep.lipschitz) {
        rep.lipschitz = false;
        rep.witness = "|delta(" + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                      ")| = " + std::to_string(a);
      }
    }

  // Concavity of the edge-addition response on zero-sum directions: probe vectors
  // first (cheap witnesses), then settle with the doubly centered spectrum.
  Eigen::MatrixXd D(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      D(i, j) = delta[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  Rng rng(seed);
  rep.max_quadratic_form = 0.0;
  for (int s = 0; s < zero_sum_samples; ++s) {
    Eigen::VectorXd x(n);
    for (int i = 0; i < n; ++i) x(i) = rng.real01() - 0.5;
    x.array() -= x.mean();
    const double norm2 = x.squaredNorm();
    if (norm2 < 1e-12) continue;
    const double q = x.dot(D * x) / norm2;
    if (q > rep.max_quadratic_form) {
      rep.max_quadratic_form = q;
      if (q > kTol && rep.witness.empty())
        rep.witness = "zero-sum probe with x'Dx/x'x = " + std::to_string(q);
    }
  }
  Eigen::MatrixXd P = Eigen::MatrixXd::Identity(n, n) -
                      Eigen::MatrixXd::Constant(n, n, 1.0 / n);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(P * D * P);
  rep.max_centered_eigenvalue = eig.eigenvalues().maxCoeff();
  rep.concave = rep.max_centered_eigenvalue <= kTol;
  if (!rep.concave && rep.witness.empty())
    rep.witness = "centered eigenvalue " + std::to_string(rep.max_centered_eigenvalue);
  return rep;
}

}  // namespace bisect
