#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "bisect/errors.hpp"
#include "bisect/interpolation.hpp"
#include "bisect/rng.hpp"

using namespace bisect;

namespace {

// The 6-half-edge instance used throughout: degrees 2,2,1,1 split so that both sides
// carry 3 half-edges.
const DegreeSequence kFig({2, 2, 1, 1});
const VertexSet kA{1, 3};
const VertexSet kB{2, 4};

ClassDecomposition empty_four() {
  // Empty matching over d = [1,1,1,1], A = {1,2}, B = {3,4}: two opposing class
  // pairs, one per side of every optimal bisection.
  DegreeSequence d({1, 1, 1, 1});
  return half_edge_classes(Matching::from_pairs(d, {}), {}, {1, 2}, {3, 4});
}

}  // namespace

TEST_SUITE("interpolation") {

TEST_CASE("psi evaluates the defect allowance") {
  CHECK(psi(0.0) == 0.0);
  CHECK(psi(1.0) == doctest::Approx(5.8279).epsilon(1e-4));
  CHECK(psi(1.0) == doctest::Approx(7.0 * std::sqrt(std::log(2.0))).epsilon(1e-14));
  CHECK(psi(2.0) == doctest::Approx(10.376126651572578).epsilon(1e-12));
  CHECK(psi(3.0) == doctest::Approx(14.2754).epsilon(1e-4));
  CHECK(psi(3.0) == doctest::Approx(7.0 * std::sqrt(3.0 * std::log(4.0))).epsilon(1e-14));
  CHECK_THROWS_AS(psi(-0.1), std::invalid_argument);

  // Increasing and concave on a grid.
  double prev = 0.0, prev_step = psi(0.5);
  for (double x = 0.5; x <= 20.0; x += 0.5) {
    double cur = psi(x);
    CHECK(cur > prev);
    if (x > 0.5) {
      double step = cur - prev;
      CHECK(step <= prev_step + 1e-12);
      prev_step = step;
    }
    prev = cur;
  }
}

TEST_CASE("class averages, exact") {
  // Linearity check: edge count averages to exactly alpha + beta + gamma.
  const PseudoParameter edges = edge_count_parameter();
  for (long long al = 0; al <= 1; ++al)
    for (long long be = 0; be <= 1; ++be)
      for (long long ga = 0; ga <= 3; ++ga) {
        EdgeTypeCounts t{al, be, ga};
        if (!is_feasible(kFig, kA, kB, t)) continue;
        CHECK(F_exact(edges, kFig, kA, kB, t) ==
              doctest::Approx(static_cast<double>(al + be + ga)).epsilon(1e-14));
      }

  const PseudoParameter konst = [](const MultiGraph&) { return 4.25; };
  CHECK(F_exact(konst, kFig, kA, kB, {1, 1, 1}) == doctest::Approx(4.25));

  // Average of the constrained max bisection over the 9 matchings in (1,1,1): the
  // A-edge contributes +1 unless it is the loop at vertex 1 (1 of 3 choices), same
  // on the B side, and the forced cross edge always cuts: (6+6+9)/9.
  const PseudoParameter hb1 = constrained_hybrid_parameter(kA, kB, 1.0);
  CHECK(F_exact(hb1, kFig, kA, kB, {1, 1, 1}) == doctest::Approx(7.0 / 3.0).epsilon(1e-12));

  CHECK_THROWS_AS(F_exact(hb1, kFig, kA, kB, {2, 0, 0}), feasibility_error);
}

TEST_CASE("class averages, sampled") {
  const PseudoParameter hb1 = constrained_hybrid_parameter(kA, kB, 1.0);
  auto est = F_mc(hb1, kFig, kA, kB, {1, 1, 1}, 2000, 13);
  CHECK(std::abs(est.value - 7.0 / 3.0) <= 3 * est.stderror + 1e-9);

  auto exact_count = F_mc(edge_count_parameter(), kFig, kA, kB, {1, 1, 1}, 200, 13);
  CHECK(exact_count.value == doctest::Approx(3.0));
  CHECK(exact_count.stderror == 0.0);

  auto again = F_mc(hb1, kFig, kA, kB, {1, 1, 1}, 2000, 13);
  CHECK(again.value == est.value);
}

TEST_CASE("F is 1-Lipschitz in the class triple") {
  const PseudoParameter hb = constrained_hybrid_parameter(kA, kB, 0.75);
  std::vector<std::pair<EdgeTypeCounts, EdgeTypeCounts>> pairs{
      {{1, 1, 1}, {1, 1, 0}},
      {{1, 1, 1}, {1, 1, 1}},
      {{0, 0, 0}, {0, 0, 1}},
      {{1, 0, 0}, {0, 1, 1}},
  };
  auto rep = check_lipschitz_F(hb, kFig, kA, kB, pairs);
  CHECK(rep.passed);

  // Edge count moves exactly at rate 1, so the bound holds with equality.
  auto tight = check_lipschitz_F(edge_count_parameter(), kFig, kA, kB, pairs);
  CHECK(tight.passed);
  CHECK(tight.lhs == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("half-edge classes of the empty four-vertex matching") {
  ClassDecomposition dec = empty_four();
  CHECK(dec.a == 2);
  CHECK(dec.b == 2);
  REQUIRE(dec.pairs.size() == 2);
  // One opposing pair per partition side: vertices 1,2 always split, 3,4 always
  // split, and the sides pair A-with-A and B-with-B.
  long long a_side = 0, b_side = 0;
  for (const auto& pr : dec.pairs) {
    CHECK(pr.o_A + pr.p_A + pr.o_B + pr.p_B == 2);
    if (pr.o_A == 1 && pr.p_A == 1) ++a_side;
    if (pr.o_B == 1 && pr.p_B == 1) ++b_side;
  }
  CHECK(a_side == 1);
  CHECK(b_side == 1);
}

TEST_CASE("half-edge classes, degenerate shapes") {
  DegreeSequence d({1, 1, 1, 1});
  Matching complete =
      Matching::from_pairs(d, {{{1, 1}, {2, 1}}, {{3, 1}, {4, 1}}});
  ClassDecomposition none = half_edge_classes(complete, {1, 1}, {1, 2}, {3, 4});
  CHECK(none.pairs.empty());
  CHECK(none.a == 0);
  CHECK(none.b == 0);

  // Both loose half-edges sit on one vertex, so they share a class.
  DegreeSequence two({2, 1, 1});
  ClassDecomposition same =
      half_edge_classes(Matching::from_pairs(two, {{{2, 1}, {3, 1}}}), {1}, {1, 2}, {3});
  CHECK(same.a == 2);
  bool found = false;
  for (const auto& pr : same.pairs) found = found || pr.o_A == 2 || pr.p_A == 2;
  CHECK(found);
}

TEST_CASE("increment formulas on the empty four-vertex matching") {
  ClassDecomposition dec = empty_four();
  // Only one A-pair exists and adding it forces a cut edge: ground truth 2p-1.
  CHECK(increment_formula(dec, 0.75, EdgeType::A, IncrementVariant::exact) ==
        doctest::Approx(0.5).epsilon(1e-14));
  CHECK(increment_formula(dec, 0.75, EdgeType::A, IncrementVariant::paper) ==
        doctest::Approx(0.625).epsilon(1e-14));
  CHECK(increment_formula(dec, 0.75, EdgeType::B, IncrementVariant::exact) ==
        doctest::Approx(0.5).epsilon(1e-14));
  for (auto variant : {IncrementVariant::paper, IncrementVariant::exact})
    CHECK(increment_formula(dec, 0.75, EdgeType::cross, variant) ==
          doctest::Approx(0.75).epsilon(1e-14));

  DegreeSequence d({1, 1, 1, 1});
  Matching empty = Matching::from_pairs(d, {});
  CHECK(increment_bruteforce(empty, {}, {1, 2}, {3, 4}, 0.75, EdgeType::A) ==
        doctest::Approx(0.5).epsilon(1e-14));
  CHECK(increment_bruteforce(empty, {}, {1, 2}, {3, 4}, 0.75, EdgeType::cross) ==
        doctest::Approx(0.75).epsilon(1e-14));
  CHECK(increment_bruteforce(empty, {}, {1, 2}, {3, 4}, 1.0, EdgeType::A) ==
        doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("increment formula degenerate and singleton cases") {
  // Two singleton classes on A with no opposing members: the subtracted sums vanish
  // and the p-term survives alone.
  ClassDecomposition dec;
  dec.pairs.push_back({1, 0, 0, 0});
  dec.pairs.push_back({1, 0, 0, 0});
  dec.a = 2;
  dec.b = 0;
  CHECK(increment_formula(dec, 1.0, EdgeType::A, IncrementVariant::exact) == doctest::Approx(1.0));
  CHECK(increment_formula(dec, 1.0, EdgeType::A, IncrementVariant::paper) == doctest::Approx(1.0));

  CHECK_THROWS_AS(increment_formula(dec, 0.5, EdgeType::B, IncrementVariant::exact),
                  std::invalid_argument);
  CHECK_THROWS_AS(increment_formula(dec, 0.5, EdgeType::cross, IncrementVariant::exact),
                  std::invalid_argument);
}

TEST_CASE("variant difference is exactly the denominator swap") {
  Rng rng(99);
  for (int trial = 0; trial < 40; ++trial) {
    ClassDecomposition dec;
    int k = 1 + static_cast<int>(rng.below(3));
    for (int i = 0; i < k; ++i)
      dec.pairs.push_back({static_cast<long long>(rng.below(3)),
                           static_cast<long long>(rng.below(3)),
                           static_cast<long long>(rng.below(3)),
                           static_cast<long long>(rng.below(3))});
    for (const auto& pr : dec.pairs) {
      dec.a += pr.o_A + pr.p_A;
      dec.b += pr.o_B + pr.p_B;
    }
    if (dec.a < 2) continue;
    double p = rng.real01();
    double opposing = 0.0;
    for (const auto& pr : dec.pairs) opposing += 2.0 * pr.o_A * pr.p_A;
    const double a = static_cast<double>(dec.a);
    double paper = increment_formula(dec, p, EdgeType::A, IncrementVariant::paper);
    double exact = increment_formula(dec, p, EdgeType::A, IncrementVariant::exact);
    CHECK(paper - exact ==
          doctest::Approx((1.0 - p) * opposing * (1.0 / (a * (a - 1)) - 1.0 / (a * a)))
              .epsilon(1e-12));
    CHECK(paper >= exact - 1e-12);
  }
}

TEST_CASE("exact variant matches brute force on enumerated instances") {
  DegreeSequence d({2, 1, 2, 1});
  VertexSet A{1, 2}, B{3, 4};
  visit_matchings(d, false, [&](std::span<const HalfEdgePair> ps) {
    const Matching m = Matching::from_pairs(d, {ps.begin(), ps.end()});
    const std::size_t E = ps.size();
    for (std::uint32_t omega = 0; omega < (1u << E); ++omega) {
      std::vector<int> labels(E);
      for (std::size_t e = 0; e < E; ++e) labels[e] = (omega >> e) & 1u ? 1 : -1;
      ClassDecomposition dec = half_edge_classes(m, labels, A, B);
      for (double p : {0.5, 0.8}) {
        if (dec.a >= 2)
          CHECK(increment_formula(dec, p, EdgeType::A, IncrementVariant::exact) ==
                doctest::Approx(increment_bruteforce(m, labels, A, B, p, EdgeType::A))
                    .epsilon(1e-12));
        if (dec.a >= 1 && dec.b >= 1)
          CHECK(increment_formula(dec, p, EdgeType::cross, IncrementVariant::paper) ==
                doctest::Approx(increment_bruteforce(m, labels, A, B, p, EdgeType::cross))
                    .epsilon(1e-12));
      }
    }
  });
}

TEST_CASE("class value table matches direct class averages") {
  std::vector<double> ps{0.5, 1.0};
  ClassValueTable table = build_class_table(kFig, kA, kB, ps, 16, 1);
  REQUIRE(table.entries.contains({1, 1, 1}));
  CHECK(table.entries.at({1, 1, 1}).count == 9);
  CHECK(table.entries.at({1, 1, 1}).f[1] == doctest::Approx(7.0 / 3.0).epsilon(1e-12));

  for (const auto& [t, entry] : table.entries)
    for (std::size_t i = 0; i < ps.size(); ++i) {
      const PseudoParameter hb = constrained_hybrid_parameter(kA, kB, ps[i]);
      CHECK(entry.f[i] == doctest::Approx(F_exact(hb, kFig, kA, kB, t)).epsilon(1e-12));
    }

  // Same table regardless of worker count.
  ClassValueTable wide = build_class_table(kFig, kA, kB, ps, 16, 8);
  REQUIRE(wide.entries.size() == table.entries.size());
  for (const auto& [t, entry] : table.entries) {
    CHECK(wide.entries.at(t).count == entry.count);
    for (std::size_t i = 0; i < ps.size(); ++i) CHECK(wide.entries.at(t).f[i] == entry.f[i]);
  }
}

TEST_CASE("local near-superadditivity on the six-half-edge instance") {
  for (double p : {0.5, 0.75, 1.0}) {
    const PseudoParameter hb = constrained_hybrid_parameter(kA, kB, p);
    auto rep = check_local_superadd(hb, kFig, kA, kB, {0, 0, 0}, 2);
    CHECK(rep.passed);
  }
  ClassValueTable table = build_class_table(kFig, kA, kB, {0.75}, 16, 1);
  auto direct = check_local_superadd(constrained_hybrid_parameter(kA, kB, 0.75), kFig, kA, kB,
                                     {0, 0, 0}, 2);
  auto from_table = check_local_superadd(table, 0, {0, 0, 0}, 2);
  CHECK(from_table.lhs == doctest::Approx(direct.lhs).epsilon(1e-12));
  CHECK(from_table.rhs == doctest::Approx(direct.rhs).epsilon(1e-12));

  // delta must make the reference triple feasible.
  CHECK_THROWS_AS(check_local_superadd(table, 0, {1, 1, 1}, 2), feasibility_error);
}

TEST_CASE("desired inequality endpoints and affinity") {
  ClassDecomposition dec = empty_four();
  auto at_one = check_desired_inequality(dec, 1.0);
  CHECK(at_one.report.passed);
  CHECK(at_one.report.lhs == doctest::Approx(-0.5).epsilon(1e-14));
  CHECK(at_one.report.lhs == doctest::Approx(at_one.sos_at_one).epsilon(1e-12));

  auto at_half = check_desired_inequality(dec, 0.5);
  CHECK(at_half.report.passed);
  CHECK(at_half.report.lhs == doctest::Approx(-0.5).epsilon(1e-14));
  CHECK(at_half.report.lhs == doctest::Approx(at_half.sos_at_half).epsilon(1e-12));

  // The expression is affine in p, so the endpoint values determine the segment.
  for (int step = 0; step <= 10; ++step) {
    double p = 0.5 + 0.05 * step;
    auto rep = check_desired_inequality(dec, p);
    CHECK(rep.report.passed);
    double interpolated =
        at_half.report.lhs + (p - 0.5) / 0.5 * (at_one.report.lhs - at_half.report.lhs);
    CHECK(rep.report.lhs == doctest::Approx(interpolated).epsilon(1e-12));
  }

  // Symmetric profiles cancel exactly: boundary pass at 0.
  ClassDecomposition sym;
  sym.pairs.push_back({1, 1, 1, 1});
  sym.a = sym.b = 2;
  auto flat = check_desired_inequality(sym, 0.75);
  CHECK(flat.report.passed);
  CHECK(flat.report.lhs == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("interpolation inequality on the six-half-edge instance") {
  const PseudoParameter hb = constrained_hybrid_parameter(kA, kB, 0.75);
  CHECK(check_interpolation_inequality(hb, kFig, kA, kB, 1).passed);
  CHECK(check_interpolation_inequality(hb, kFig, kA, kB, 3).passed);

  auto boundary = check_interpolation_inequality(hb, kFig, kA, kB, 0);
  CHECK(boundary.passed);
  CHECK(boundary.lhs == doctest::Approx(boundary.rhs).epsilon(1e-12));

  CHECK_THROWS_AS(check_interpolation_inequality(hb, kFig, kA, kB, 4), feasibility_error);
}

TEST_CASE("subadditivity of the expected hybrid value, exact mode") {
  DegreeSequence d({1, 1, 1, 1});
  VertexSet A{1, 2}, B{3, 4};
  auto rep = check_subadditivity(d, A, B, 0.75, EstimateMode::exact);
  CHECK(rep.passed);
  CHECK(rep.lhs == doctest::Approx(1.0).epsilon(1e-12));  // two forced K2 halves: 2(2p-1)
  CHECK(rep.rhs ==
        doctest::Approx((4 * 0.75 - 2) / 3.0 + 4 * 0.75 * 0.75 / 3.0 + psi(2.0)).epsilon(1e-12));
  CHECK(check_subadditivity(d, A, B, 1.0, EstimateMode::exact).passed);

  CHECK_THROWS_AS(check_subadditivity(d, {1, 2, 3, 4}, {}, 0.75, EstimateMode::exact),
                  std::invalid_argument);
  CHECK_THROWS_AS(check_subadditivity(DegreeSequence({2, 1, 2, 1}), {1, 2}, {3, 4}, 0.75,
                                      EstimateMode::exact),
                  parity_error);
}

TEST_CASE("subadditivity, sampled mode agrees") {
  DegreeSequence d({2, 2, 2, 2});
  VertexSet A{1, 2}, B{3, 4};
  SubadditivityOptions opts;
  opts.graph_samples = 30;
  opts.labeling_samples = 60;
  opts.seed = 321;
  auto mc = check_subadditivity(d, A, B, 0.75, EstimateMode::monte_carlo, opts);
  CHECK(mc.passed);  // psi(4) dwarfs any estimation noise here
  auto exact = check_subadditivity(d, A, B, 0.75, EstimateMode::exact);
  CHECK(exact.passed);
  CHECK(std::abs(mc.lhs - exact.lhs) < 1.0);
}

TEST_CASE("corollary: unconstrained class start stays below the plain average") {
  auto rep = check_corollary_average(constrained_hybrid_parameter(kA, kB, 0.75), kFig, kA, kB);
  CHECK(rep.passed);
}

}  // TEST_SUITE
