#include "bisect/degrees.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "bisect/errors.hpp"
#include "bisect/rng.hpp"

namespace bisect {

namespace {
constexpr double kMassTol = 1e-12;
}

DegreeSequence::DegreeSequence(std::vector<int> degrees) : degrees_(std::move(degrees)) {
  if (degrees_.empty()) throw std::invalid_argument("degree sequence must be nonempty");
  for (int d : degrees_) {
    if (d < 0) throw std::invalid_argument("degrees must be nonnegative");
    total_ += d;
  }
}

DegreeSequence DegreeSequence::restrict_to(const std::vector<int>& vertices) const {
  std::vector<int> sub;
  sub.reserve(vertices.size());
  for (int v : vertices) sub.push_back(degree(v));
  return DegreeSequence(std::move(sub));
}

DegreeDistribution DegreeDistribution::from_mass(std::map<int, double> mass) {
  if (mass.empty()) throw std::invalid_argument("distribution needs at least one mass point");
  double sum = 0.0, mean = 0.0;
  for (auto& [k, p] : mass) {
    if (k < 0) throw std::invalid_argument("degree support must be nonnegative");
    if (p < 0.0) throw std::invalid_argument("masses must be nonnegative");
    sum += p;
    mean += k * p;
  }
  if (std::abs(sum - 1.0) > kMassTol)
    throw std::invalid_argument("masses must sum to 1 within 1e-12");
  DegreeDistribution out;
  out.mass_ = std::move(mass);
  out.mean_ = mean;
  return out;
}

double DegreeDistribution::mass(int k) const {
  auto it = mass_.find(k);
  return it == mass_.end() ? 0.0 : it->second;
}

int DegreeDistribution::max_support() const { return mass_.rbegin()->first; }

DegreeDistribution empirical_distribution(const DegreeSequence& d) {
  std::map<int, double> mass;
  const double w = 1.0 / d.size();
  for (int deg : d.degrees()) mass[deg] += w;
  return DegreeDistribution::from_mass(std::move(mass));
}

DegreeDistribution regular_distribution(int r) {
  if (r < 0) throw std::invalid_argument("regular degree must be nonnegative");
  return DegreeDistribution::from_mass({{r, 1.0}});
}

DegreeDistribution truncated_poisson(double lambda, int cutoff) {
  if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
  if (cutoff < 0) throw std::invalid_argument("cutoff must be nonnegative");
  std::vector<double> terms(static_cast<std::size_t>(cutoff) + 1);
  terms[0] = std::exp(-lambda);
  for (int k = 1; k <= cutoff; ++k)
    terms[static_cast<std::size_t>(k)] = terms[static_cast<std::size_t>(k - 1)] * lambda / k;
  double z = 0.0;
  for (double t : terms) z += t;
  std::map<int, double> mass;
  for (int k = 0; k <= cutoff; ++k) mass[k] = terms[static_cast<std::size_t>(k)] / z;
  // Renormalization drift can leave the sum a few ulp away from 1; pin it on the
  // largest mass so the constructor invariant holds exactly.
  double sum = 0.0;
  for (auto& [k, p] : mass) sum += p;
  auto top = std::max_element(mass.begin(), mass.end(),
                              [](auto& a, auto& b) { return a.second < b.second; });
  top->second += 1.0 - sum;
  return DegreeDistribution::from_mass(std::move(mass));
}

double wasserstein(const DegreeDistribution& mu, const DegreeDistribution& nu) {
  const int top = std::max(mu.max_support(), nu.max_support());
  double tail = 0.0, w = 0.0;
  for (int i = top; i >= 1; --i) {
    tail += mu.mass(i) - nu.mass(i);
    w += std::abs(tail);
  }
  return w;
}

DegreeSequence sample_iid_degrees(const DegreeDistribution& mu, int n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("need n >= 1");
  // Inverse-CDF over the sorted support.
  std::vector<std::pair<double, int>> cdf;
  cdf.reserve(mu.masses().size());
  double acc = 0.0;
  for (auto& [k, p] : mu.masses()) {
    acc += p;
    cdf.emplace_back(acc, k);
  }
  cdf.back().first = 1.0;
  Rng rng(seed);
  std::vector<int> out(static_cast<std::size_t>(n));
  for (auto& d : out) {
    const double u = rng.real01();
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u,
                               [](double x, const auto& e) { return x < e.first; });
    d = (it == cdf.end() ? cdf.back() : *it).second;
  }
  return DegreeSequence(std::move(out));
}

ConvergenceReport check_distributional_convergence(const std::vector<DegreeSequence>& seqs,
                                                   const DegreeDistribution& mu, double tol) {
  if (seqs.empty()) throw std::invalid_argument("need at least one degree sequence");
  if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
  const DegreeSequence* largest = &seqs.front();
  for (const auto& s : seqs)
    if (s.size() > largest->size()) largest = &s;

  const DegreeDistribution emp = empirical_distribution(*largest);
  std::set<int> support;
  for (auto& [k, p] : mu.masses()) support.insert(k);
  for (auto& [k, p] : emp.masses()) support.insert(k);

  ConvergenceReport rep;
  for (int k : support) {
    const double gap = std::abs(emp.mass(k) - mu.mass(k));
    rep.histogram_gap[k] = gap;
    rep.max_histogram_gap = std::max(rep.max_histogram_gap, gap);
  }
  rep.mean_gap = std::abs(emp.mean() - mu.mean());
  rep.pass = rep.max_histogram_gap < tol && rep.mean_gap < tol;
  return rep;
}

}  // namespace bisect
