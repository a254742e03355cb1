#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bisect/degrees.hpp"
#include "bisect/interpolation.hpp"
#include "bisect/json_io.hpp"

namespace bisect {

// Degree model for sampled instances.  regular/explicit_sequence give a fixed
// sequence; poisson/histogram draw each vertex's degree i.i.d. from the distribution.
struct DegreeModel {
  enum class Kind { regular, poisson, histogram, explicit_sequence };
  Kind kind = Kind::regular;
  int r = 0;                   // regular
  double lambda = 0.0;         // poisson
  int truncation = 0;          // poisson support cutoff
  std::vector<double> masses;  // histogram: masses[k] = P(degree = k)
  std::vector<int> degrees;    // explicit_sequence

  DegreeDistribution distribution() const;
};

DegreeModel degree_model_from_json(const Json& j);
Json degree_model_to_json(const DegreeModel& m);

struct SampledDegrees {
  DegreeSequence d;
  int repairs = 0;  // 1 if an odd total was repaired by bumping a uniform vertex
};

// Degrees for one instance.  With repair_parity, an odd total is fixed by adding one
// to a uniformly chosen vertex's degree; without it, callers must cope with odd
// totals themselves (maximum matchings leave one half-edge over).
SampledDegrees degrees_from_model(const DegreeModel& m, int n, std::uint64_t seed,
                                  bool repair_parity);

struct ExperimentConfig {
  std::string kind;  // convergence | subadditivity | concentration | conjecture |
                     // mu-lipschitz | p-scan
  DegreeModel model;
  std::optional<DegreeModel> model_b;  // second model for mu-lipschitz
  std::vector<int> sizes;              // ascending
  double p = 1.0;
  long long replicas = 1;
  SolverKind solver = SolverKind::exact;
  std::uint64_t master_seed = 1;
  std::string output;        // empty: print to stdout
  std::string format = "csv";  // csv | jsonl | plotdata

  // Optional knobs with serviceable defaults.
  long long labeling_samples = 200;      // per-graph labelings when 0 < p < 1
  int graph_samples = 20;                // matchings per expectation (subadditivity)
  std::vector<double> epsilon_fractions;  // concentration grid, in units of sqrt(sum d)
  std::vector<double> ps;                 // p-scan grid
  bool timings = false;  // record wall time per replica (breaks byte-reproducibility)
  int threads = 1;
};

ExperimentConfig experiment_config_from_json(const Json& j);

struct ResultRecord {
  int n = 0;
  long long replica = 0;
  std::uint64_t seed = 0;
  double value = 0.0;
  double value_per_n = 0.0;
  double stderror = 0.0;
  long long runtime_ms = 0;

  bool operator==(const ResultRecord&) const = default;
};

struct SummaryRow {
  int n = 0;
  long long replicas = 0;
  double mean_value_per_n = 0.0;
  double stderror = 0.0;  // standard error of the mean above
};

struct ExperimentOutcome {
  std::vector<ResultRecord> records;
  std::vector<SummaryRow> summary;  // one row per n, ascending
  Json details;                     // kind-specific report
};

ExperimentOutcome run_experiment(const ExperimentConfig& cfg);

// The individual runners behind run_experiment.
ExperimentOutcome run_convergence(const ExperimentConfig& cfg);
ExperimentOutcome run_subadditivity(const ExperimentConfig& cfg);
ExperimentOutcome run_concentration(const ExperimentConfig& cfg);
ExperimentOutcome run_conjecture(const ExperimentConfig& cfg);
ExperimentOutcome run_mu_lipschitz(const ExperimentConfig& cfg);
ExperimentOutcome run_p_scan(const ExperimentConfig& cfg);

// Near-superadditivity of s_n = E[HB_p] under i.i.d. degrees: for all tested m, n
// with m + n also tested, s_{m+n} >= s_m + s_n - psi(mean_degree*(m+n)/2) - 3 sigma.
CheckReport fekete_probe(const DegreeModel& model, double p, const std::vector<int>& sizes,
                         long long replicas, std::uint64_t seed, int threads = 1);

std::string render_csv(const std::vector<ResultRecord>& records);
std::string render_jsonl(const std::vector<ResultRecord>& records);
std::vector<ResultRecord> parse_jsonl(const std::string& text);

// Two-column "n mean" data plus an ".err" sidecar with "n stderr".
struct PlotData {
  std::string data;
  std::string err;
};
PlotData render_plotdata(const std::vector<SummaryRow>& summary);

// Writes the chosen format to path (plotdata adds a path + ".err" sidecar) and
// returns the files written.
std::vector<std::string> emit_outputs(const ExperimentOutcome& outcome,
                                      const std::string& format, const std::string& path);

}  // namespace bisect
