#pragma once

#include <cstdint>
#include <map>
#include <vector>

namespace bisect {

// Degree sequence d : {1..n} -> N, n >= 1.  Vertices are 1-based everywhere.
class DegreeSequence {
 public:
  explicit DegreeSequence(std::vector<int> degrees);

  int size() const { return static_cast<int>(degrees_.size()); }
  int degree(int v) const { return degrees_.at(static_cast<std::size_t>(v - 1)); }
  long long total() const { return total_; }
  const std::vector<int>& degrees() const { return degrees_; }

  // Restriction to a sorted vertex subset, reindexed 1..|S| in order.
  DegreeSequence restrict_to(const std::vector<int>& vertices) const;

  bool operator==(const DegreeSequence&) const = default;

 private:
  std::vector<int> degrees_;
  long long total_ = 0;
};

// Finite-support probability distribution on degrees.  Masses are kept in a sorted
// map; they must be nonnegative and sum to 1 within 1e-12.  The mean is recomputed
// from the masses on construction.
class DegreeDistribution {
 public:
  static DegreeDistribution from_mass(std::map<int, double> mass);

  double mass(int k) const;
  double mean() const { return mean_; }
  int max_support() const;
  const std::map<int, double>& masses() const { return mass_; }

 private:
  DegreeDistribution() = default;
  std::map<int, double> mass_;
  double mean_ = 0.0;
};

DegreeDistribution empirical_distribution(const DegreeSequence& d);
DegreeDistribution regular_distribution(int r);

// Poisson(lambda) conditioned on {0..cutoff}, renormalized.
DegreeDistribution truncated_poisson(double lambda, int cutoff);

// W(mu, nu) = sum_{i>=1} | sum_{k>=i} (mu(k) - nu(k)) |.
double wasserstein(const DegreeDistribution& mu, const DegreeDistribution& nu);

DegreeSequence sample_iid_degrees(const DegreeDistribution& mu, int n, std::uint64_t seed);

struct ConvergenceReport {
  std::map<int, double> histogram_gap;  // per-degree |empirical - mu| for the largest n
  double max_histogram_gap = 0.0;
  double mean_gap = 0.0;
  bool pass = false;
};

// Two independent conditions, both required: the per-degree histogram gap and the
// mean gap of the largest sequence must each stay below tol.
ConvergenceReport check_distributional_convergence(const std::vector<DegreeSequence>& seqs,
                                                   const DegreeDistribution& mu,
                                                   double tol = 0.05);

}  // namespace bisect
