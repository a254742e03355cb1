#include "bisect/interpolation.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <climits>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <utility>

#include "bisect/errors.hpp"
#include "bisect/parallel.hpp"
#include "bisect/rng.hpp"

namespace bisect {

namespace {

constexpr double kExactTol = 1e-12;

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

std::string fmt(const EdgeTypeCounts& t) {
  return "(" + std::to_string(t.alpha) + "," + std::to_string(t.beta) + "," +
         std::to_string(t.gamma) + ")";
}

CheckReport make_report(double lhs, double rhs, double tol, std::string witness) {
  CheckReport r;
  r.lhs = lhs;
  r.rhs = rhs;
  r.slack = rhs - lhs;
  r.passed = lhs <= rhs + tol;
  r.witness = std::move(witness);
  return r;
}

// 0 = A, 1 = B per vertex, 1-based.
std::vector<char> side_lookup(int n, const VertexSet& A, const VertexSet& B) {
  validate_partition(n, A, B);
  std::vector<char> side(static_cast<std::size_t>(n) + 1, 0);
  for (int v : B) side[static_cast<std::size_t>(v)] = 1;
  return side;
}

MultiGraph graph_from_span(int n, std::span<const HalfEdgePair> pairs) {
  MultiGraph g;
  g.n = n;
  g.edges.reserve(pairs.size());
  for (const auto& [x, y] : pairs)
    g.edges.emplace_back(std::min(x.vertex, y.vertex), std::max(x.vertex, y.vertex));
  return g;
}

void validate_probability(double p) {
  if (!(p >= 0.0 && p <= 1.0))
    throw std::invalid_argument("label probability must lie in [0, 1]");
}

void validate_labels(const Matching& m, const std::vector<int>& labels) {
  if (labels.size() != m.pairs().size())
    throw std::invalid_argument("need exactly one label per matched pair");
  for (int s : labels)
    if (s != 1 && s != -1) throw std::invalid_argument("labels must be +1 or -1");
}

long long degree_total(const DegreeSequence& d, const VertexSet& S) {
  long long t = 0;
  for (int v : S) t += d.degree(v);
  return t;
}

}  // namespace

double psi(double x) {
  if (!(x >= 0.0)) throw std::invalid_argument("psi is defined for nonnegative arguments");
  return 7.0 * std::sqrt(x * std::log1p(x));
}

PseudoParameter constrained_hybrid_parameter(VertexSet A, VertexSet B, double p) {
  validate_probability(p);
  return [A = std::move(A), B = std::move(B), p](const MultiGraph& g) {
    return constrained_hybrid_exact(g, A, B, p).value;
  };
}

PseudoParameter edge_count_parameter() {
  return [](const MultiGraph& g) { return static_cast<double>(g.edge_count()); };
}

double F_exact(const PseudoParameter& g, const DegreeSequence& d, const VertexSet& A,
               const VertexSet& B, const EdgeTypeCounts& t, int max_half_edges) {
  if (!is_feasible(d, A, B, t))
    throw feasibility_error("class " + fmt(t) + " is empty for this degree sequence and split");
  long long count = 0;
  double sum = 0.0;
  visit_class(
      d, A, B, t,
      [&](std::span<const HalfEdgePair> pairs) {
        ++count;
        sum += g(graph_from_span(d.size(), pairs));
      },
      max_half_edges);
  return sum / static_cast<double>(count);
}

HybridEstimate F_mc(const PseudoParameter& g, const DegreeSequence& d, const VertexSet& A,
                    const VertexSet& B, const EdgeTypeCounts& t, long long samples,
                    std::uint64_t seed) {
  if (samples < 1) throw std::invalid_argument("need at least one sample");
  double sum = 0.0, sumsq = 0.0;
  for (long long i = 0; i < samples; ++i) {
    const Matching m =
        sample_in_class(d, A, B, t, derive_seed(seed, static_cast<std::uint64_t>(i)));
    const double v = g(graph_of_matching(m));
    sum += v;
    sumsq += v * v;
  }
  HybridEstimate est;
  est.mode = EstimateMode::monte_carlo;
  est.samples = samples;
  est.value = sum / static_cast<double>(samples);
  if (samples >= 2) {
    const double n = static_cast<double>(samples);
    const double var = std::max(0.0, (sumsq - sum * sum / n) / (n - 1.0));
    est.stderror = std::sqrt(var / n);
  }
  return est;
}

CheckReport check_lipschitz_F(const PseudoParameter& g, const DegreeSequence& d,
                              const VertexSet& A, const VertexSet& B,
                              const std::vector<std::pair<EdgeTypeCounts, EdgeTypeCounts>>& pairs,
                              int max_half_edges) {
  if (pairs.empty()) return make_report(0.0, 0.0, kExactTol, "no class pairs checked");
  std::map<EdgeTypeCounts, double> cache;
  auto value = [&](const EdgeTypeCounts& t) {
    auto it = cache.find(t);
    if (it == cache.end())
      it = cache.emplace(t, F_exact(g, d, A, B, t, max_half_edges)).first;
    return it->second;
  };
  double worst = -1.0;
  std::string witness;
  for (const auto& [s, t] : pairs) {
    const double gap = std::abs(value(s) - value(t));
    const double bound = static_cast<double>(std::abs(s.alpha - t.alpha) +
                                             std::abs(s.beta - t.beta) +
                                             std::abs(s.gamma - t.gamma));
    const double excess = gap - bound;
    if (excess > worst) {
      worst = excess;
      witness = "worst pair " + fmt(s) + " vs " + fmt(t) + ": |dF| = " + fmt(gap) +
                ", allowed " + fmt(bound);
    }
  }
  return make_report(worst, 0.0, kExactTol, std::move(witness));
}

ClassDecomposition half_edge_classes(const Matching& m, const std::vector<int>& labels,
                                     const VertexSet& A, const VertexSet& B) {
  validate_labels(m, labels);
  const int n = m.base().size();
  const std::vector<char> side = side_lookup(n, A, B);

  const SignedGraph sg{graph_of_matching(m), labels};
  const std::vector<Bisection> optima = enumerate_optimal_constrained(sg, A, B);

  // Vertices sharing one side pattern across every optimum form a class; the class
  // with the complementary pattern (opposite in every optimum) is its opposing one.
  std::vector<std::string> pattern(static_cast<std::size_t>(n) + 1);
  for (int v = 1; v <= n; ++v) {
    std::string& s = pattern[static_cast<std::size_t>(v)];
    s.reserve(optima.size());
    for (const Bisection& b : optima) s.push_back(b.side(v) == 1 ? '1' : '2');
  }
  auto flipped = [](const std::string& s) {
    std::string f = s;
    for (char& c : f) c = (c == '1') ? '2' : '1';
    return f;
  };

  ClassDecomposition dec;
  std::map<std::string, std::size_t> class_id;
  std::vector<std::string> class_pattern;
  std::vector<std::array<long long, 2>> counts;  // per class: [on A, on B]
  for (const HalfEdge& h : m.unmatched()) {
    const std::string& s = pattern[static_cast<std::size_t>(h.vertex)];
    auto [it, fresh] = class_id.try_emplace(s, class_pattern.size());
    if (fresh) {
      class_pattern.push_back(s);
      counts.push_back({0, 0});
    }
    ++counts[it->second][static_cast<std::size_t>(side[static_cast<std::size_t>(h.vertex)])];
    if (side[static_cast<std::size_t>(h.vertex)] == 0)
      ++dec.a;
    else
      ++dec.b;
  }

  std::vector<char> consumed(class_pattern.size(), 0);
  for (std::size_t c = 0; c < class_pattern.size(); ++c) {
    if (consumed[c]) continue;
    consumed[c] = 1;
    OpposingPair pr;
    pr.o_A = counts[c][0];
    pr.o_B = counts[c][1];
    auto it = class_id.find(flipped(class_pattern[c]));
    if (it != class_id.end() && !consumed[it->second]) {
      consumed[it->second] = 1;
      pr.p_A = counts[it->second][0];
      pr.p_B = counts[it->second][1];
    }
    dec.pairs.push_back(pr);
  }
  return dec;
}

double increment_formula(const ClassDecomposition& dec, double p, EdgeType type,
                         IncrementVariant variant) {
  validate_probability(p);
  const double a = static_cast<double>(dec.a);
  const double b = static_cast<double>(dec.b);

  // One new edge of the given type joins two uniform unmatched half-edges.  With a +
  // label the cut grows by one unless the endpoints are tied to the same side; with a
  // - label it loses one exactly when they are tied to opposite sides.
  double same = 0.0, opposite = 0.0;
  double den_same = 0.0, den_opposite = 0.0;
  switch (type) {
    case EdgeType::A: {
      if (dec.a < 2)
        throw std::invalid_argument("an A-edge increment needs two unmatched half-edges on A");
      for (const OpposingPair& pr : dec.pairs) {
        const double oA = static_cast<double>(pr.o_A), pA = static_cast<double>(pr.p_A);
        same += oA * (oA - 1.0) + pA * (pA - 1.0);
        opposite += 2.0 * oA * pA;
      }
      den_same = a * (a - 1.0);
      den_opposite = variant == IncrementVariant::paper ? a * a : a * (a - 1.0);
      break;
    }
    case EdgeType::B: {
      if (dec.b < 2)
        throw std::invalid_argument("a B-edge increment needs two unmatched half-edges on B");
      for (const OpposingPair& pr : dec.pairs) {
        const double oB = static_cast<double>(pr.o_B), pB = static_cast<double>(pr.p_B);
        same += oB * (oB - 1.0) + pB * (pB - 1.0);
        opposite += 2.0 * oB * pB;
      }
      den_same = b * (b - 1.0);
      den_opposite = variant == IncrementVariant::paper ? b * b : b * (b - 1.0);
      break;
    }
    case EdgeType::cross: {
      if (dec.a < 1 || dec.b < 1)
        throw std::invalid_argument("a cross increment needs unmatched half-edges on both sides");
      for (const OpposingPair& pr : dec.pairs) {
        same += static_cast<double>(pr.o_A) * static_cast<double>(pr.o_B) +
                static_cast<double>(pr.p_A) * static_cast<double>(pr.p_B);
        opposite += static_cast<double>(pr.o_A) * static_cast<double>(pr.p_B) +
                    static_cast<double>(pr.p_A) * static_cast<double>(pr.o_B);
      }
      den_same = den_opposite = a * b;
      break;
    }
  }
  return p * (1.0 - same / den_same) - (1.0 - p) * opposite / den_opposite;
}

double increment_bruteforce(const Matching& m, const std::vector<int>& labels,
                            const VertexSet& A, const VertexSet& B, double p, EdgeType type) {
  validate_probability(p);
  validate_labels(m, labels);
  const int n = m.base().size();
  const std::vector<char> side = side_lookup(n, A, B);

  std::vector<HalfEdge> onA, onB;
  for (const HalfEdge& h : m.unmatched())
    (side[static_cast<std::size_t>(h.vertex)] == 0 ? onA : onB).push_back(h);

  std::vector<std::pair<HalfEdge, HalfEdge>> candidates;
  switch (type) {
    case EdgeType::A:
      for (std::size_t i = 0; i < onA.size(); ++i)
        for (std::size_t j = i + 1; j < onA.size(); ++j) candidates.emplace_back(onA[i], onA[j]);
      break;
    case EdgeType::B:
      for (std::size_t i = 0; i < onB.size(); ++i)
        for (std::size_t j = i + 1; j < onB.size(); ++j) candidates.emplace_back(onB[i], onB[j]);
      break;
    case EdgeType::cross:
      for (const HalfEdge& x : onA)
        for (const HalfEdge& y : onB) candidates.emplace_back(x, y);
      break;
  }
  if (candidates.empty())
    throw std::invalid_argument("no unmatched pair of the requested type exists");

  SignedGraph sg{graph_of_matching(m), labels};
  const long long base = constrained_max_bisection(sg, A, B).value;

  sg.graph.edges.emplace_back(0, 0);
  sg.labels.push_back(1);
  double plus = 0.0, minus = 0.0;
  for (const auto& [x, y] : candidates) {
    sg.graph.edges.back() = {std::min(x.vertex, y.vertex), std::max(x.vertex, y.vertex)};
    sg.labels.back() = 1;
    plus += static_cast<double>(constrained_max_bisection(sg, A, B).value - base);
    sg.labels.back() = -1;
    minus += static_cast<double>(constrained_max_bisection(sg, A, B).value - base);
  }
  const double count = static_cast<double>(candidates.size());
  return p * plus / count + (1.0 - p) * minus / count;
}

ClassValueTable build_class_table(const DegreeSequence& d, const VertexSet& A,
                                  const VertexSet& B, std::vector<double> ps,
                                  int max_half_edges, int threads) {
  if (ps.empty()) throw std::invalid_argument("need at least one label probability");
  for (double p : ps) validate_probability(p);
  if (d.total() > max_half_edges)
    throw guard_error("class table limited to " + std::to_string(max_half_edges) +
                      " half-edges (got " + std::to_string(d.total()) + ")");
  const int n = d.size();
  const std::vector<char> side = side_lookup(n, A, B);
  const std::vector<std::uint32_t> masks = detail::constrained_side2_masks(n, A, B);

  const std::size_t max_edges = static_cast<std::size_t>(d.total() / 2);
  std::vector<std::vector<double>> ppow(ps.size()), qpow(ps.size());
  for (std::size_t i = 0; i < ps.size(); ++i) {
    ppow[i].resize(max_edges + 1);
    qpow[i].resize(max_edges + 1);
    ppow[i][0] = qpow[i][0] = 1.0;
    for (std::size_t k = 1; k <= max_edges; ++k) {
      ppow[i][k] = ppow[i][k - 1] * ps[i];
      qpow[i][k] = qpow[i][k - 1] * (1.0 - ps[i]);
    }
  }

  // One accumulator per enumeration shard, merged in shard order below, so the sums
  // are identical for every thread count.
  using Accum = std::map<EdgeTypeCounts, ClassValueTable::Entry>;
  const std::size_t shards = static_cast<std::size_t>(d.total());
  std::vector<Accum> partial(std::max<std::size_t>(shards, 1));

  auto sweep_shard = [&](std::size_t shard) {
    Accum& acc = partial[shard];
    std::vector<std::uint32_t> patterns;
    visit_matchings_shard(
        d, false, static_cast<int>(shard),
        [&](std::span<const HalfEdgePair> pairs) {
          const std::size_t E = pairs.size();
          EdgeTypeCounts key;
          for (const auto& [x, y] : pairs) {
            const char sx = side[static_cast<std::size_t>(x.vertex)];
            const char sy = side[static_cast<std::size_t>(y.vertex)];
            if (sx == 0 && sy == 0)
              ++key.alpha;
            else if (sx == 1 && sy == 1)
              ++key.beta;
            else
              ++key.gamma;
          }

          // Distinct cross-or-not patterns over this matching's edges; the best cut of
          // a labeling depends on its labels only through these.
          patterns.clear();
          for (std::uint32_t mask : masks) {
            std::uint32_t c = 0;
            for (std::size_t e = 0; e < E; ++e) {
              const auto& [x, y] = pairs[e];
              const std::uint32_t su = (mask >> (x.vertex - 1)) & 1u;
              const std::uint32_t sv = (mask >> (y.vertex - 1)) & 1u;
              c |= (su ^ sv) << e;
            }
            patterns.push_back(c);
          }
          std::sort(patterns.begin(), patterns.end());
          patterns.erase(std::unique(patterns.begin(), patterns.end()), patterns.end());

          auto [it, fresh] = acc.try_emplace(key);
          if (fresh) it->second.f.assign(ps.size(), 0.0);
          ClassValueTable::Entry& entry = it->second;
          ++entry.count;
          for (std::uint32_t omega = 0; omega < (1u << E); ++omega) {
            int best = INT_MIN;
            for (std::uint32_t c : patterns) {
              const int v = 2 * std::popcount(c & omega) - std::popcount(c);
              if (v > best) best = v;
            }
            const std::size_t plus = static_cast<std::size_t>(std::popcount(omega));
            for (std::size_t i = 0; i < ps.size(); ++i)
              entry.f[i] += ppow[i][plus] * qpow[i][E - plus] * static_cast<double>(best);
          }
        },
        max_half_edges);
  };
  parallel_for(shards, threads, sweep_shard);

  ClassValueTable table;
  table.ps = std::move(ps);
  for (const Accum& acc : partial)
    for (const auto& [key, entry] : acc) {
      auto [it, fresh] = table.entries.try_emplace(key);
      if (fresh) it->second.f.assign(table.ps.size(), 0.0);
      it->second.count += entry.count;
      for (std::size_t i = 0; i < table.ps.size(); ++i) it->second.f[i] += entry.f[i];
    }
  for (auto& [key, entry] : table.entries)
    for (double& f : entry.f) f /= static_cast<double>(entry.count);
  return table;
}

namespace {

// Shared arithmetic of the two local-super-additivity overloads.
CheckReport superadd_report(double f_a1, double f_b1, double f_g1, long long delta,
                            const EdgeTypeCounts& t) {
  const double lhs = 0.5 * (f_a1 + f_b1);
  const double rhs = f_g1 + 2.0 / static_cast<double>(delta);
  return make_report(lhs, rhs, kExactTol,
                     "at " + fmt(t) + " with delta " + std::to_string(delta));
}

void validate_superadd_args(const DegreeSequence& d, const VertexSet& A, const VertexSet& B,
                            const EdgeTypeCounts& t, long long delta) {
  if (delta < 2) throw std::invalid_argument("the bound needs delta >= 2");
  const EdgeTypeCounts far{t.alpha, t.beta, t.gamma + delta};
  if (!is_feasible(d, A, B, far))
    throw feasibility_error("the bound applies only when " + fmt(far) + " is feasible");
}

}  // namespace

CheckReport check_local_superadd(const PseudoParameter& g, const DegreeSequence& d,
                                 const VertexSet& A, const VertexSet& B,
                                 const EdgeTypeCounts& t, long long delta,
                                 int max_half_edges) {
  validate_superadd_args(d, A, B, t, delta);
  const double f_a1 = F_exact(g, d, A, B, {t.alpha + 1, t.beta, t.gamma}, max_half_edges);
  const double f_b1 = F_exact(g, d, A, B, {t.alpha, t.beta + 1, t.gamma}, max_half_edges);
  const double f_g1 = F_exact(g, d, A, B, {t.alpha, t.beta, t.gamma + 1}, max_half_edges);
  return superadd_report(f_a1, f_b1, f_g1, delta, t);
}

namespace {

double table_value(const ClassValueTable& table, std::size_t p_index, const EdgeTypeCounts& t) {
  if (p_index >= table.ps.size()) throw std::invalid_argument("p index out of range");
  const auto it = table.entries.find(t);
  if (it == table.entries.end())
    throw feasibility_error("class " + fmt(t) + " is not present in the table");
  return it->second.f[p_index];
}

}  // namespace

CheckReport check_local_superadd(const ClassValueTable& table, std::size_t p_index,
                                 const EdgeTypeCounts& t, long long delta) {
  if (delta < 2) throw std::invalid_argument("the bound needs delta >= 2");
  table_value(table, p_index, {t.alpha, t.beta, t.gamma + delta});  // feasibility probe
  const double f_a1 = table_value(table, p_index, {t.alpha + 1, t.beta, t.gamma});
  const double f_b1 = table_value(table, p_index, {t.alpha, t.beta + 1, t.gamma});
  const double f_g1 = table_value(table, p_index, {t.alpha, t.beta, t.gamma + 1});
  return superadd_report(f_a1, f_b1, f_g1, delta, t);
}

DesiredInequalityReport check_desired_inequality(const ClassDecomposition& dec, double p) {
  validate_probability(p);
  if (dec.a < 1 || dec.b < 1)
    throw std::invalid_argument("the increment comparison needs unmatched half-edges on both sides");
  const double a = static_cast<double>(dec.a);
  const double b = static_cast<double>(dec.b);

  // Affine form: lhs(p) = -p/2 * S1 - (1-p)/2 * S2, where S1 collects the same-class
  // second moments and S2 the opposing-class cross moments of the closed forms.
  double S1 = 0.0, S2 = 0.0;
  double sq_one = 0.0, sq_half = 0.0;
  for (const OpposingPair& pr : dec.pairs) {
    const double oA = static_cast<double>(pr.o_A) / a, pA = static_cast<double>(pr.p_A) / a;
    const double oB = static_cast<double>(pr.o_B) / b, pB = static_cast<double>(pr.p_B) / b;
    S1 += oA * oA + pA * pA + oB * oB + pB * pB - 2.0 * (oA * oB + pA * pB);
    S2 += 2.0 * (oA * pA + oB * pB) - 2.0 * (oA * pB + pA * oB);
    // Independent routes to the endpoint values: both are minus sums of squares.
    sq_one += (oA - oB) * (oA - oB) + (pA - pB) * (pA - pB);
    const double diff = (oA + pA) - (oB + pB);
    sq_half += diff * diff;
  }

  DesiredInequalityReport out;
  out.sos_at_one = -0.5 * sq_one;
  out.sos_at_half = -0.25 * sq_half;
  const double lhs = -0.5 * p * S1 - 0.5 * (1.0 - p) * S2;
  out.report = make_report(lhs, 0.0, kExactTol,
                           std::to_string(dec.pairs.size()) + " opposing pairs, a = " +
                               std::to_string(dec.a) + ", b = " + std::to_string(dec.b));
  return out;
}

namespace {

CheckReport interpolation_report(double f_start, double f_end, long long gamma) {
  return make_report(f_start, f_end + psi(static_cast<double>(gamma)), kExactTol,
                     "gamma = " + std::to_string(gamma));
}

std::pair<EdgeTypeCounts, EdgeTypeCounts> interpolation_endpoints(const DegreeSequence& d,
                                                                  const VertexSet& A,
                                                                  const VertexSet& B,
                                                                  long long gamma) {
  const long long dA = degree_total(d, A);
  const long long dB = degree_total(d, B);
  if (gamma < 0 || gamma > std::min(dA, dB))
    throw feasibility_error("gamma must lie between 0 and min(d(A), d(B))");
  const EdgeTypeCounts start{dA / 2, dB / 2, 0};
  const EdgeTypeCounts end{(dA - gamma) / 2, (dB - gamma) / 2, gamma};
  return {start, end};
}

}  // namespace

CheckReport check_interpolation_inequality(const PseudoParameter& g, const DegreeSequence& d,
                                           const VertexSet& A, const VertexSet& B,
                                           long long gamma, int max_half_edges) {
  const auto [start, end] = interpolation_endpoints(d, A, B, gamma);
  const double f_start = F_exact(g, d, A, B, start, max_half_edges);
  const double f_end = F_exact(g, d, A, B, end, max_half_edges);
  return interpolation_report(f_start, f_end, gamma);
}

CheckReport check_interpolation_inequality(const ClassValueTable& table, std::size_t p_index,
                                           const DegreeSequence& d, const VertexSet& A,
                                           const VertexSet& B, long long gamma) {
  const auto [start, end] = interpolation_endpoints(d, A, B, gamma);
  const double f_start = table_value(table, p_index, start);
  const double f_end = table_value(table, p_index, end);
  return interpolation_report(f_start, f_end, gamma);
}

namespace {

struct MeanWithError {
  double mean = 0.0;
  double stderror = 0.0;
  bool heuristic = false;
};

// Average of exact hybrid values over all complete matchings of d.
double exact_expectation(const DegreeSequence& d,
                         const std::function<double(const MultiGraph&)>& value,
                         int max_half_edges) {
  long long count = 0;
  double sum = 0.0;
  visit_matchings(
      d, true,
      [&](std::span<const HalfEdgePair> pairs) {
        ++count;
        sum += value(graph_from_span(d.size(), pairs));
      },
      max_half_edges);
  return sum / static_cast<double>(count);
}

MeanWithError sampled_expectation(const DegreeSequence& d, std::uint64_t seed,
                                  std::uint64_t stream,
                                  const std::function<HybridEstimate(const MultiGraph&, std::uint64_t)>& value,
                                  int graph_samples) {
  MeanWithError out;
  double sum = 0.0, sumsq = 0.0;
  for (int i = 0; i < graph_samples; ++i) {
    const std::uint64_t s = derive_seed(seed, stream, static_cast<std::uint64_t>(i));
    const Matching m = sample_complete_matching(d, s);
    const HybridEstimate est = value(graph_of_matching(m), derive_seed(s, 1));
    sum += est.value;
    sumsq += est.value * est.value;
    out.heuristic = out.heuristic || est.heuristic_lower_bound;
  }
  const double n = static_cast<double>(graph_samples);
  out.mean = sum / n;
  if (graph_samples >= 2) {
    // The spread of per-graph estimates already carries both the graph and the
    // labeling noise, so this single outer error is the one to report.
    const double var = std::max(0.0, (sumsq - sum * sum / n) / (n - 1.0));
    out.stderror = std::sqrt(var / n);
  }
  return out;
}

McOptions solver_for(int n, const LocalSearchParams& search, int threads) {
  McOptions opts;
  opts.threads = threads;
  if (n > 14) {
    opts.solver = SolverKind::heuristic;
    opts.search = search;
  }
  return opts;
}

}  // namespace

CheckReport check_subadditivity(const DegreeSequence& d, const VertexSet& A, const VertexSet& B,
                                double p, EstimateMode mode, const SubadditivityOptions& opts) {
  validate_probability(p);
  validate_partition(d.size(), A, B);
  if (A.empty() || B.empty())
    throw std::invalid_argument("both split sides need at least one vertex");
  if (d.total() % 2 != 0) throw parity_error("total degree must be even");
  if (degree_total(d, A) % 2 != 0)
    throw parity_error("the split must give both sides even total degree");
  if (opts.graph_samples < 2) throw std::invalid_argument("need at least two graph samples");

  const DegreeSequence dA = d.restrict_to(A);
  const DegreeSequence dB = d.restrict_to(B);
  const double allowance = psi(static_cast<double>(d.total() / 2));

  double lhs = 0.0, rhs = 0.0, tol = kExactTol;
  std::string witness;
  if (mode == EstimateMode::exact) {
    const double eA = exact_expectation(
        dA, [&](const MultiGraph& g) { return hybrid_exact(g, p).value; }, opts.max_half_edges);
    const double eB = exact_expectation(
        dB, [&](const MultiGraph& g) { return hybrid_exact(g, p).value; }, opts.max_half_edges);
    const double eFull = exact_expectation(
        d, [&](const MultiGraph& g) { return constrained_hybrid_exact(g, A, B, p).value; },
        opts.max_half_edges);
    lhs = eA + eB;
    rhs = eFull + allowance;
    witness = "E[A] = " + fmt(eA) + ", E[B] = " + fmt(eB) + ", E[full] = " + fmt(eFull) +
              ", allowance = " + fmt(allowance);
  } else {
    const MeanWithError mA = sampled_expectation(
        dA, opts.seed, 0xA,
        [&](const MultiGraph& g, std::uint64_t s) {
          return hybrid_mc(g, p, opts.labeling_samples, s,
                           solver_for(g.n, opts.search, opts.threads));
        },
        opts.graph_samples);
    const MeanWithError mB = sampled_expectation(
        dB, opts.seed, 0xB,
        [&](const MultiGraph& g, std::uint64_t s) {
          return hybrid_mc(g, p, opts.labeling_samples, s,
                           solver_for(g.n, opts.search, opts.threads));
        },
        opts.graph_samples);
    const MeanWithError mFull = sampled_expectation(
        d, opts.seed, 0xF,
        [&](const MultiGraph& g, std::uint64_t s) {
          return constrained_hybrid_mc(g, A, B, p, opts.labeling_samples, s,
                                       solver_for(g.n, opts.search, opts.threads));
        },
        opts.graph_samples);
    lhs = mA.mean + mB.mean;
    rhs = mFull.mean + allowance;
    tol = 3.0 * std::sqrt(mA.stderror * mA.stderror + mB.stderror * mB.stderror +
                          mFull.stderror * mFull.stderror) +
          kExactTol;
    witness = "E[A] = " + fmt(mA.mean) + ", E[B] = " + fmt(mB.mean) +
              ", E[full] = " + fmt(mFull.mean) + ", allowance = " + fmt(allowance) +
              ", 3-sigma margin = " + fmt(tol);
    if (mA.heuristic || mB.heuristic || mFull.heuristic)
      witness += " (heuristic solver: values are lower bounds)";
  }
  return make_report(lhs, rhs, tol, std::move(witness));
}

CheckReport check_corollary_average(const PseudoParameter& g, const DegreeSequence& d,
                                    const VertexSet& A, const VertexSet& B,
                                    int max_half_edges) {
  if (d.total() % 2 != 0) throw parity_error("total degree must be even");
  const long long dA = degree_total(d, A);
  const long long dB = degree_total(d, B);
  const double f_start = F_exact(g, d, A, B, {dA / 2, dB / 2, 0}, max_half_edges);
  const double mean = exact_expectation(d, g, max_half_edges);
  const double allowance = psi(static_cast<double>(d.total() / 2));
  return make_report(f_start, mean + allowance, kExactTol,
                     "complete-matching mean = " + fmt(mean) + ", allowance = " + fmt(allowance));
}

}  // namespace bisect
