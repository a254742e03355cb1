#include <doctest.h>

#include <cmath>
#include <map>
#include <stdexcept>
#include <vector>

#include "bisect/degrees.hpp"
#include "bisect/rng.hpp"

using namespace bisect;

TEST_SUITE("degrees") {

TEST_CASE("degree sequence basics") {
  DegreeSequence d({2, 2, 1, 1});
  CHECK(d.size() == 4);
  CHECK(d.degree(1) == 2);
  CHECK(d.degree(4) == 1);
  CHECK(d.total() == 6);
  CHECK_THROWS_AS(DegreeSequence({}), std::invalid_argument);
  CHECK_THROWS_AS(DegreeSequence({1, -1}), std::invalid_argument);
}

TEST_CASE("restriction reindexes in order") {
  DegreeSequence d({2, 2, 1, 1});
  DegreeSequence dA = d.restrict_to({1, 3});
  CHECK(dA.size() == 2);
  CHECK(dA.degree(1) == 2);
  CHECK(dA.degree(2) == 1);
  CHECK(dA.total() == 3);
}

TEST_CASE("empirical distribution counts degrees") {
  auto mu = empirical_distribution(DegreeSequence({2, 2, 1, 1}));
  CHECK(mu.mass(1) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(mu.mass(2) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(mu.mean() == doctest::Approx(1.5).epsilon(1e-15));

  auto nu = empirical_distribution(DegreeSequence({3, 3, 3}));
  CHECK(nu.mass(3) == 1.0);
  CHECK(nu.mean() == 3.0);

  auto rho = empirical_distribution(DegreeSequence({0, 0, 4}));
  CHECK(rho.mass(0) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(rho.mass(4) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(rho.mean() == doctest::Approx(4.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("regular distribution is a point mass") {
  CHECK(regular_distribution(3).mass(3) == 1.0);
  CHECK(regular_distribution(3).mean() == 3.0);
  CHECK(regular_distribution(0).mass(0) == 1.0);
  CHECK(regular_distribution(0).mean() == 0.0);
  CHECK(regular_distribution(1).mean() == 1.0);
}

TEST_CASE("truncated poisson") {
  auto mu = truncated_poisson(2.0, 10);
  // Independent series oracle: e^{-2} 2^k / k!, renormalized over k <= 10.
  double z = 0.0, term = std::exp(-2.0);
  std::vector<double> raw;
  for (int k = 0; k <= 10; ++k) {
    raw.push_back(term);
    z += term;
    term *= 2.0 / (k + 1);
  }
  CHECK(mu.mass(0) == doctest::Approx(raw[0] / z).epsilon(1e-12));
  CHECK(mu.mass(0) == doctest::Approx(0.13533640764185262).epsilon(1e-9));
  CHECK(mu.mean() == doctest::Approx(1.9999236196641175).epsilon(1e-9));

  double sum = 0.0;
  for (int k = 0; k <= 10; ++k) sum += mu.mass(k);
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));

  // Two equal unnormalized terms e^{-1}.
  auto nu = truncated_poisson(1.0, 1);
  CHECK(nu.mass(0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(nu.mass(1) == doctest::Approx(0.5).epsilon(1e-12));

  CHECK_THROWS_AS(truncated_poisson(0.0, 5), std::invalid_argument);
  CHECK_THROWS_AS(truncated_poisson(-1.0, 5), std::invalid_argument);
}

TEST_CASE("distribution construction validates") {
  CHECK_THROWS_AS(DegreeDistribution::from_mass({{0, 0.5}, {1, 0.4}}), std::invalid_argument);
  CHECK_THROWS_AS(DegreeDistribution::from_mass({{0, 1.2}, {1, -0.2}}), std::invalid_argument);
}

TEST_CASE("wasserstein tail-sum values") {
  auto d2 = regular_distribution(2);
  auto d3 = regular_distribution(3);
  CHECK(wasserstein(d2, d2) == 0.0);
  CHECK(wasserstein(d2, d3) == doctest::Approx(1.0).epsilon(1e-15));

  auto mix = DegreeDistribution::from_mass({{1, 0.5}, {2, 0.5}});
  CHECK(wasserstein(mix, d2) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("wasserstein is a metric on random triples") {
  Rng rng(123);
  for (int trial = 0; trial < 100; ++trial) {
    auto random_dist = [&] {
      int support = 1 + static_cast<int>(rng.below(5));
      std::map<int, double> mass;
      double total = 0.0;
      for (int k = 0; k < support; ++k) {
        double w = rng.real01() + 1e-3;
        mass[static_cast<int>(rng.below(8))] += w;
        total += w;
      }
      for (auto& [k, w] : mass) w /= total;
      return DegreeDistribution::from_mass(mass);
    };
    auto a = random_dist(), b = random_dist(), c = random_dist();
    double ab = wasserstein(a, b), ba = wasserstein(b, a);
    CHECK(ab == doctest::Approx(ba).epsilon(1e-12));
    CHECK(ab >= 0.0);
    CHECK(wasserstein(a, c) <= ab + wasserstein(b, c) + 1e-12);
    CHECK(wasserstein(a, a) == 0.0);
  }
}

TEST_CASE("iid degree sampling") {
  auto mu = regular_distribution(3);
  DegreeSequence d = sample_iid_degrees(mu, 5, 42);
  for (int v = 1; v <= 5; ++v) CHECK(d.degree(v) == 3);

  auto mix = DegreeDistribution::from_mass({{1, 0.5}, {2, 0.5}});
  DegreeSequence big = sample_iid_degrees(mix, 10000, 7);
  CHECK(wasserstein(empirical_distribution(big), mix) < 0.05);

  CHECK(sample_iid_degrees(mix, 100, 9).degrees() == sample_iid_degrees(mix, 100, 9).degrees());
  CHECK_THROWS_AS(sample_iid_degrees(mix, 0, 1), std::invalid_argument);
}

TEST_CASE("convergence report") {
  auto d3 = regular_distribution(3);
  std::vector<DegreeSequence> regs;
  for (int n : {10, 20, 40}) regs.emplace_back(std::vector<int>(n, 3));
  auto rep = check_distributional_convergence(regs, d3, 0.05);
  CHECK(rep.pass);
  CHECK(rep.max_histogram_gap <= 1e-12);
  CHECK(rep.mean_gap <= 1e-12);

  auto mix = DegreeDistribution::from_mass({{1, 0.5}, {2, 0.5}});
  std::vector<DegreeSequence> halves;
  for (int n : {10, 50, 100}) {
    std::vector<int> deg(n, 1);
    for (int i = n / 2; i < n; ++i) deg[i] = 2;
    halves.emplace_back(deg);
  }
  CHECK(check_distributional_convergence(halves, mix, 0.1).pass);

  // One huge-degree vertex: histogram converges to the point mass at 1 but the
  // mean stays off by 1, so the mean condition fails on its own.
  std::vector<DegreeSequence> spiked;
  for (int n : {20, 60, 200}) {
    std::vector<int> deg(n, 1);
    deg[0] = n;
    spiked.emplace_back(deg);
  }
  auto spiked_rep = check_distributional_convergence(spiked, regular_distribution(1), 0.05);
  CHECK(spiked_rep.max_histogram_gap < 0.05);
  CHECK(spiked_rep.mean_gap > 0.9);
  CHECK_FALSE(spiked_rep.pass);
}

}  // TEST_SUITE
