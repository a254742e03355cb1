#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "bisect/cuts.hpp"
#include "bisect/errors.hpp"
#include "bisect/hybrid.hpp"
#include "bisect/rng.hpp"

using namespace bisect;

namespace {

MultiGraph random_graph(Rng& rng, int n, int edges) {
  MultiGraph g{n, {}};
  for (int e = 0; e < edges; ++e) {
    int u = 1 + static_cast<int>(rng.below(n));
    int v = 1 + static_cast<int>(rng.below(n));
    g.edges.emplace_back(std::min(u, v), std::max(u, v));
  }
  return g;
}

}  // namespace

TEST_SUITE("hybrid") {

TEST_CASE("labeling sampler") {
  MultiGraph g{3, {{1, 2}, {2, 3}, {1, 3}}};
  SignedGraph all1 = sample_labeling(g, 1.0, 9);
  CHECK(std::all_of(all1.labels.begin(), all1.labels.end(), [](int s) { return s == 1; }));
  SignedGraph all0 = sample_labeling(g, 0.0, 9);
  CHECK(std::all_of(all0.labels.begin(), all0.labels.end(), [](int s) { return s == -1; }));
  CHECK_THROWS_AS(sample_labeling(g, 1.5, 9), std::invalid_argument);

  MultiGraph big{2, std::vector<std::pair<int, int>>(10000, {1, 2})};
  SignedGraph half = sample_labeling(big, 0.5, 31);
  long long plus = std::count(half.labels.begin(), half.labels.end(), 1);
  CHECK(std::abs(plus - 5000) < 3 * 50);  // 3 sigma of Binomial(10^4, 1/2)
  CHECK(sample_labeling(big, 0.5, 31).labels == half.labels);
}

TEST_CASE("exact hybrid closed forms") {
  MultiGraph k2{2, {{1, 2}}};
  for (double p : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    auto est = hybrid_exact(k2, p);
    CHECK(est.value == doctest::Approx(2 * p - 1).epsilon(1e-14));
    CHECK(est.stderror == 0.0);
    CHECK(est.mode == EstimateMode::exact);
  }

  MultiGraph k3{3, {{1, 2}, {1, 3}, {2, 3}}};
  CHECK(hybrid_exact(k3, 0.5).value == doctest::Approx(0.75).epsilon(1e-14));

  MultiGraph too_big{22, {}};
  for (int v = 1; v < 22; ++v) too_big.edges.emplace_back(v, v + 1);
  CHECK_THROWS_AS(hybrid_exact(too_big, 0.5), guard_error);
}

TEST_CASE("exact hybrid hits the endpoint parameters on random instances") {
  Rng rng(17);
  for (int trial = 0; trial < 30; ++trial) {
    MultiGraph g = random_graph(rng, 4 + static_cast<int>(rng.below(4)), 7);
    CHECK(hybrid_exact(g, 1.0).value ==
          doctest::Approx(static_cast<double>(signed_max_bisection(all_plus(g)).value)));
    CHECK(hybrid_exact(g, 0.0).value ==
          doctest::Approx(-static_cast<double>(min_bisection(g).value)));
  }
}

TEST_CASE("monte carlo hybrid") {
  MultiGraph k3{3, {{1, 2}, {1, 3}, {2, 3}}};
  auto est = hybrid_mc(k3, 0.5, 10000, 41);
  CHECK(est.mode == EstimateMode::monte_carlo);
  CHECK(est.samples == 10000);
  CHECK(est.stderror > 0.0);
  CHECK(std::abs(est.value - 0.75) <= 3 * est.stderror);

  auto sure = hybrid_mc(k3, 1.0, 50, 41);
  CHECK(sure.value == doctest::Approx(2.0));  // MB(K3)
  CHECK(sure.stderror == 0.0);

  auto again = hybrid_mc(k3, 0.5, 10000, 41);
  CHECK(again.value == est.value);
  CHECK(again.stderror == est.stderror);
}

TEST_CASE("monte carlo is schedule independent") {
  MultiGraph g{6, {{1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 6}, {1, 6}, {2, 5}}};
  McOptions serial;
  serial.threads = 1;
  McOptions wide;
  wide.threads = 4;
  auto a = hybrid_mc(g, 0.6, 2000, 77, serial);
  auto b = hybrid_mc(g, 0.6, 2000, 77, wide);
  CHECK(a.value == b.value);
  CHECK(a.stderror == b.stderror);
}

TEST_CASE("heuristic solver flag is recorded") {
  MultiGraph g{4, {{1, 2}, {3, 4}, {1, 3}}};
  McOptions opts;
  opts.solver = SolverKind::heuristic;
  auto est = hybrid_mc(g, 0.5, 50, 3, opts);
  CHECK(est.heuristic_lower_bound);
  CHECK_FALSE(hybrid_mc(g, 0.5, 50, 3).heuristic_lower_bound);
}

TEST_CASE("constrained exact closed forms") {
  VertexSet A{1, 2}, B{3, 4};
  MultiGraph cross{4, {{1, 3}, {2, 4}}};
  for (double p : {0.0, 0.3, 0.5, 0.9, 1.0}) {
    // The two constrained bisections cut either both edges or neither, so the
    // optimum is max(0, w13 + w24) and only the ++ labeling contributes.
    CHECK(constrained_hybrid_exact(cross, A, B, p).value ==
          doctest::Approx(2 * p * p).epsilon(1e-14));
  }

  MultiGraph forced{4, {{1, 2}, {3, 4}}};
  for (double p : {0.0, 0.3, 0.5, 0.9, 1.0}) {
    // Both edges cross every (A,B)-bisection, so each contributes its label.
    CHECK(constrained_hybrid_exact(forced, A, B, p).value ==
          doctest::Approx(2 * (2 * p - 1)).epsilon(1e-14));
  }
}

TEST_CASE("constrained equals split sum when nothing crosses") {
  Rng rng(23);
  for (int trial = 0; trial < 30; ++trial) {
    int half = 2 + static_cast<int>(rng.below(2));
    int n = 2 * half;
    VertexSet A, B;
    for (int v = 1; v <= n; ++v) (v <= half ? A : B).push_back(v);
    MultiGraph g{n, {}}, ga{half, {}}, gb{half, {}};
    for (int e = 0; e < 3; ++e) {
      int u = 1 + static_cast<int>(rng.below(half)), v = 1 + static_cast<int>(rng.below(half));
      g.edges.emplace_back(std::min(u, v), std::max(u, v));
      ga.edges.emplace_back(std::min(u, v), std::max(u, v));
      int x = half + 1 + static_cast<int>(rng.below(half));
      int y = half + 1 + static_cast<int>(rng.below(half));
      g.edges.emplace_back(std::min(x, y), std::max(x, y));
      gb.edges.emplace_back(std::min(x, y) - half, std::max(x, y) - half);
    }
    double p = 0.25 * (1 + static_cast<int>(rng.below(3)));
    CHECK(constrained_hybrid_exact(g, A, B, p).value ==
          doctest::Approx(hybrid_exact(ga, p).value + hybrid_exact(gb, p).value)
              .epsilon(1e-12));
  }
}

TEST_CASE("constrained monte carlo") {
  VertexSet A{1, 2}, B{3, 4};
  MultiGraph forced{4, {{1, 2}, {3, 4}}};
  auto zero = constrained_hybrid_mc(forced, A, B, 0.0, 100, 5);
  CHECK(zero.value == doctest::Approx(-2.0));
  CHECK(zero.stderror == 0.0);

  MultiGraph empty{4, {}};
  auto none = constrained_hybrid_mc(empty, A, B, 0.5, 100, 5);
  CHECK(none.value == 0.0);
  CHECK(none.stderror == 0.0);

  Rng rng(37);
  for (int trial = 0; trial < 20; ++trial) {
    MultiGraph g = random_graph(rng, 4, 5);
    double p = 0.1 * (1 + static_cast<int>(rng.below(9)));
    auto exact = constrained_hybrid_exact(g, A, B, p);
    auto mc = constrained_hybrid_mc(g, A, B, p, 4000, derive_seed(500, trial));
    // 4 sigma, not 3: twenty independent comparisons would trip a 3-sigma
    // bound with ~5% probability even for a perfectly unbiased estimator.
    CHECK(std::abs(mc.value - exact.value) <= 4 * mc.stderror + 1e-9);
  }
}

TEST_CASE("hybrid value is monotone in p") {
  Rng rng(44);
  for (int trial = 0; trial < 30; ++trial) {
    MultiGraph g = random_graph(rng, 4 + static_cast<int>(rng.below(3)), 6);
    double prev = hybrid_exact(g, 0.0).value;
    for (int step = 1; step <= 10; ++step) {
      double cur = hybrid_exact(g, 0.1 * step).value;
      CHECK(cur >= prev - 1e-12);
      prev = cur;
    }
  }
}

TEST_CASE("one added edge moves the hybrid value by at most 1") {
  Rng rng(58);
  for (int trial = 0; trial < 20; ++trial) {
    MultiGraph g = random_graph(rng, 4 + static_cast<int>(rng.below(3)), 6);
    double p = 0.25 * (1 + static_cast<int>(rng.below(3)));
    double before = hybrid_exact(g, p).value;
    MultiGraph plus = g;
    int u = 1 + static_cast<int>(rng.below(g.n)), v = 1 + static_cast<int>(rng.below(g.n));
    plus.edges.emplace_back(std::min(u, v), std::max(u, v));
    CHECK(std::abs(hybrid_exact(plus, p).value - before) <= 1.0 + 1e-12);
  }
}

TEST_CASE("constraining never helps") {
  Rng rng(61);
  for (int trial = 0; trial < 20; ++trial) {
    int n = 4 + 2 * static_cast<int>(rng.below(3));
    MultiGraph g = random_graph(rng, n, 7);
    VertexSet A, B;
    for (int v = 1; v <= n; ++v) (v <= n / 2 ? A : B).push_back(v);
    double p = 0.25 * (1 + static_cast<int>(rng.below(3)));
    CHECK(constrained_hybrid_exact(g, A, B, p).value <= hybrid_exact(g, p).value + 1e-12);
  }
}

}  // TEST_SUITE
