#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "bisect/config_model.hpp"
#include "bisect/cuts.hpp"
#include "bisect/hybrid.hpp"

namespace bisect {

// Defect allowance of the interpolation bounds.
double psi(double x);

// Counts of one opposing pair of unmatched-half-edge classes, split by side of the
// vertex partition: o_A members of O on A-vertices, p_A members of P on A-vertices,
// and likewise on B.  Classes without an opposing partner get an all-zero partner.
struct OpposingPair {
  long long o_A = 0, p_A = 0, o_B = 0, p_B = 0;
};

struct ClassDecomposition {
  std::vector<OpposingPair> pairs;
  long long a = 0;  // unmatched half-edges on A-vertices
  long long b = 0;  // unmatched half-edges on B-vertices
};

struct CheckReport {
  bool passed = false;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;  // rhs - lhs
  std::string witness;
};

using PseudoParameter = std::function<double(const MultiGraph&)>;

// g(G) = expected constrained max bisection of (G, random labels) at this p.
PseudoParameter constrained_hybrid_parameter(VertexSet A, VertexSet B, double p);
PseudoParameter edge_count_parameter();

// F_g(t) = average of g over the class M(alpha, beta, gamma); exact enumeration.
double F_exact(const PseudoParameter& g, const DegreeSequence& d, const VertexSet& A,
               const VertexSet& B, const EdgeTypeCounts& t, int max_half_edges = 16);

HybridEstimate F_mc(const PseudoParameter& g, const DegreeSequence& d, const VertexSet& A,
                    const VertexSet& B, const EdgeTypeCounts& t, long long samples,
                    std::uint64_t seed);

// |F(t) - F(t')| <= |t - t'|_1 for every listed pair.  lhs is the worst gap minus its
// bound, rhs is 0.
CheckReport check_lipschitz_F(const PseudoParameter& g, const DegreeSequence& d,
                              const VertexSet& A, const VertexSet& B,
                              const std::vector<std::pair<EdgeTypeCounts, EdgeTypeCounts>>& pairs,
                              int max_half_edges = 16);

// Equivalence classes of the unmatched half-edges of m under "same side in every
// optimal constrained bisection of (G[m], labels)", paired with their opposing
// classes.  labels indexes m.pairs().
ClassDecomposition half_edge_classes(const Matching& m, const std::vector<int>& labels,
                                     const VertexSet& A, const VertexSet& B);

enum class EdgeType { A, B, cross };

// The printed closed forms keep a squared denominator in their (1-p) terms; the exact
// variant replaces a^2, b^2 with a(a-1), b(b-1), matching the unordered pair count.
// Cross-edge increments have no such discrepancy.
enum class IncrementVariant { paper, exact };

double increment_formula(const ClassDecomposition& dec, double p, EdgeType type,
                         IncrementVariant variant);

// Expected change of the constrained max bisection when one uniform unmatched pair of
// the given type is joined and labeled +1 w.p. p: the ground truth for the formulas.
double increment_bruteforce(const Matching& m, const std::vector<int>& labels,
                            const VertexSet& A, const VertexSet& B, double p, EdgeType type);

// F values of every feasible class in one enumeration pass, for several p at once.
// Entry f[i] is the class average of the constrained hybrid value at ps[i].
struct ClassValueTable {
  std::vector<double> ps;
  struct Entry {
    long long count = 0;
    std::vector<double> f;
  };
  std::map<EdgeTypeCounts, Entry> entries;
};

ClassValueTable build_class_table(const DegreeSequence& d, const VertexSet& A,
                                  const VertexSet& B, std::vector<double> ps,
                                  int max_half_edges = 16, int threads = 1);

// (F(a+1,b,g) + F(a,b+1,g))/2 <= F(a,b,g+1) + 2/delta, required whenever
// (a, b, g+delta) is feasible and delta >= 2.
CheckReport check_local_superadd(const PseudoParameter& g, const DegreeSequence& d,
                                 const VertexSet& A, const VertexSet& B,
                                 const EdgeTypeCounts& t, long long delta,
                                 int max_half_edges = 16);
CheckReport check_local_superadd(const ClassValueTable& table, std::size_t p_index,
                                 const EdgeTypeCounts& t, long long delta);

struct DesiredInequalityReport {
  CheckReport report;
  double sos_at_one = 0.0;   // value at p=1: minus a sum of squares
  double sos_at_half = 0.0;  // value at p=1/2: minus a sum of squares
};

// The affine-in-p expression bounding the increment mismatch; nonpositive on
// p in [1/2, 1] because both endpoint forms are minus sums of squares.
DesiredInequalityReport check_desired_inequality(const ClassDecomposition& dec, double p);

// F(floor(dA/2), floor(dB/2), 0) <= F(floor((dA-g)/2), floor((dB-g)/2), g) + psi(g).
CheckReport check_interpolation_inequality(const PseudoParameter& g, const DegreeSequence& d,
                                           const VertexSet& A, const VertexSet& B,
                                           long long gamma, int max_half_edges = 16);
CheckReport check_interpolation_inequality(const ClassValueTable& table, std::size_t p_index,
                                           const DegreeSequence& d, const VertexSet& A,
                                           const VertexSet& B, long long gamma);

struct SubadditivityOptions {
  int graph_samples = 20;         // mc mode: matchings drawn per expectation
  long long labeling_samples = 100;  // mc mode: labelings per matching
  std::uint64_t seed = 1;
  int threads = 1;
  int max_half_edges = 16;  // exact-mode enumeration guard
  // The psi allowance dwarfs the estimation error here, so the probe's annealer can
  // afford to be much lighter than the solver default.
  LocalSearchParams search{4, 80, 0.99, 0.0};
};

// E[HB_p(sub-model on A)] + E[HB_p(sub-model on B)] <= E[HB_p^{A,B}(full model)]
// + psi(|E|).  Exact mode enumerates complete matchings (d(A), d(B) must be even);
// mc mode samples and widens the comparison by three combined standard errors.
CheckReport check_subadditivity(const DegreeSequence& d, const VertexSet& A, const VertexSet& B,
                                double p, EstimateMode mode,
                                const SubadditivityOptions& opts = {});

// F(floor(dA/2), floor(dB/2), 0) <= E[g(full model)] + psi(|E|), exact enumeration.
CheckReport check_corollary_average(const PseudoParameter& g, const DegreeSequence& d,
                                    const VertexSet& A, const VertexSet& B,
                                    int max_half_edges = 16);

}  // namespace bisect
