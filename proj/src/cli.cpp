#include "bisect/cli.hpp"

#include <CLI11.hpp>
#include <iostream>
#include <limits>
#include <optional>

#include "bisect/errors.hpp"
#include "bisect/experiments.hpp"
#include "bisect/rng.hpp"

namespace bisect {

namespace {

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty())
    std::cout << text;
  else
    write_text_file(out_path, text);
}

void emit_json(const Json& j, const std::string& out_path) { emit(j.dump(2) + "\n", out_path); }

VertexSet to_vertex_set(const std::vector<int>& vs) { return VertexSet(vs.begin(), vs.end()); }

struct GenArgs {
  int n = 0;
  int regular = -1;
  double lambda = -1.0;
  int truncation = 0;
  std::vector<double> masses;
  std::vector<int> degrees;
  std::string config;
  std::string matching = "complete";
  std::uint64_t seed = 1;
  std::string out;
};

int run_gen(const GenArgs& a) {
  DegreeModel model;
  int sources = 0;
  if (a.regular >= 0) {
    model.kind = DegreeModel::Kind::regular;
    model.r = a.regular;
    ++sources;
  }
  if (a.lambda >= 0.0) {
    model.kind = DegreeModel::Kind::poisson;
    model.lambda = a.lambda;
    model.truncation = a.truncation;
    ++sources;
  }
  if (!a.masses.empty()) {
    model.kind = DegreeModel::Kind::histogram;
    model.masses = a.masses;
    ++sources;
  }
  if (!a.degrees.empty()) {
    model.kind = DegreeModel::Kind::explicit_sequence;
    model.degrees = a.degrees;
    ++sources;
  }
  if (!a.config.empty()) {
    model = degree_model_from_json(load_json_file(a.config));
    ++sources;
  }
  if (sources != 1)
    throw config_error("pick exactly one of --regular, --poisson, --masses, --degrees, --config");
  model.distribution();  // validates the parameters

  int n = a.n;
  if (model.kind == DegreeModel::Kind::explicit_sequence) {
    if (n != 0 && n != static_cast<int>(model.degrees.size()))
      throw config_error("--n contradicts the --degrees length");
    n = static_cast<int>(model.degrees.size());
  }
  if (n < 1) throw config_error("--n must be at least 1");

  const bool complete = a.matching == "complete";
  if (!complete && a.matching != "maximum")
    throw config_error("--matching must be complete or maximum");
  const SampledDegrees sd = degrees_from_model(model, n, a.seed, complete);
  const Matching m = complete ? sample_complete_matching(sd.d, derive_seed(a.seed, 2))
                              : sample_maximum_matching(sd.d, derive_seed(a.seed, 2));
  emit_json(graph_to_json(graph_of_matching(m)), a.out);
  return 0;
}

struct CutArgs {
  std::string graph;
  std::string objective = "max-cut";
  std::vector<int> side_a, side_b;
  double alpha = 0.5;
  std::string sense = "max";
  std::string out;
};

int run_cut(const CutArgs& a) {
  const SignedGraph sg = signed_graph_from_json(load_json_file(a.graph));
  const CutResult res = [&]() -> CutResult {
    if (a.objective == "max-cut") return max_cut(sg.graph);
    if (a.objective == "max-bisection") return signed_max_bisection(sg);
    if (a.objective == "min-bisection") return min_bisection(sg.graph);
    if (a.objective == "constrained-max-bisection") {
      if (a.side_a.empty() || a.side_b.empty())
        throw config_error("constrained-max-bisection needs --side-a and --side-b");
      return constrained_max_bisection(sg, to_vertex_set(a.side_a), to_vertex_set(a.side_b));
    }
    if (a.objective == "alpha-cut") {
      if (a.sense != "min" && a.sense != "max") throw config_error("--sense must be min or max");
      return alpha_cut(sg, a.alpha, a.sense == "min" ? CutSense::minimize : CutSense::maximize);
    }
    throw config_error("unknown objective " + a.objective);
  }();
  Json j = Json{{"objective", a.objective}};
  j.update(cut_result_to_json(res));
  emit_json(j, a.out);
  return 0;
}

struct HybridArgs {
  std::string graph;
  double p = 1.0;
  std::string mode = "auto";
  long long samples = 200;
  std::uint64_t seed = 1;
  std::vector<int> side_a, side_b;
  std::string out;
};

int run_hybrid(const HybridArgs& a) {
  const SignedGraph sg = signed_graph_from_json(load_json_file(a.graph));
  if (!(a.p >= 0.0 && a.p <= 1.0)) throw config_error("--p must lie in [0, 1]");
  if (a.side_a.empty() != a.side_b.empty())
    throw config_error("--side-a and --side-b go together");
  const bool constrained = !a.side_a.empty();
  bool exact = a.mode == "exact";
  if (a.mode == "auto")
    exact = sg.graph.edge_count() <= 20;
  else if (a.mode != "exact" && a.mode != "mc")
    throw config_error("--mode must be auto, exact, or mc");

  HybridEstimate est;
  if (constrained) {
    const VertexSet A = to_vertex_set(a.side_a), B = to_vertex_set(a.side_b);
    est = exact ? constrained_hybrid_exact(sg.graph, A, B, a.p)
                : constrained_hybrid_mc(sg.graph, A, B, a.p, a.samples, a.seed);
  } else {
    est = exact ? hybrid_exact(sg.graph, a.p) : hybrid_mc(sg.graph, a.p, a.samples, a.seed);
  }
  emit_json(hybrid_estimate_to_json(est), a.out);
  return 0;
}

struct InterpArgs {
  std::string kind;
  std::string config;
  std::uint64_t seed = 1;
  int threads = 1;
  std::string out;
};

// interp-check configs share {degrees, side_a, side_b, p} plus kind-specific fields;
// unknown keys are rejected so typos fail loudly.
int run_interp_check(const InterpArgs& a) {
  const Json cfg = load_json_file(a.config);
  if (!cfg.is_object()) throw config_error("interp-check config must be a JSON object");
  std::set<std::string> known{"degrees", "side_a", "side_b", "p"};
  if (a.kind == "lipschitz") known.insert("pairs");
  if (a.kind == "superadd") {
    known.insert("class");
    known.insert("delta");
  }
  if (a.kind == "interpolation") known.insert("gamma");
  if (a.kind == "subadditivity") {
    known.insert("mode");
    known.insert("graph_samples");
    known.insert("labeling_samples");
  }
  for (const auto& [key, value] : cfg.items())
    if (!known.contains(key)) throw config_error("interp-check config: unknown key \"" + key + "\"");

  DegreeSequence d = degrees_from_json(cfg.at("degrees"));
  VertexSet A = vertex_set_from_json(cfg.at("side_a"));
  VertexSet B = vertex_set_from_json(cfg.at("side_b"));
  double p = cfg.value("p", 1.0);
  if (!(p >= 0.0 && p <= 1.0)) throw config_error("p must lie in [0, 1]");
  const PseudoParameter g = constrained_hybrid_parameter(A, B, p);

  Json result;
  if (a.kind == "lipschitz") {
    std::vector<std::pair<EdgeTypeCounts, EdgeTypeCounts>> pairs;
    if (!cfg.contains("pairs")) throw config_error("lipschitz check needs \"pairs\"");
    for (const Json& pr : cfg.at("pairs")) {
      if (!pr.is_array() || pr.size() != 2)
        throw config_error("each lipschitz pair is [[a,b,g],[a,b,g]]");
      pairs.emplace_back(edge_counts_from_json(pr[0]), edge_counts_from_json(pr[1]));
    }
    result = check_report_to_json(check_lipschitz_F(g, d, A, B, pairs));
  } else if (a.kind == "superadd") {
    if (!cfg.contains("class")) throw config_error("superadd check needs \"class\": [a,b,g]");
    const EdgeTypeCounts t = edge_counts_from_json(cfg.at("class"));
    const long long delta = cfg.value("delta", 2);
    result = check_report_to_json(check_local_superadd(g, d, A, B, t, delta));
  } else if (a.kind == "interpolation") {
    if (!cfg.contains("gamma")) throw config_error("interpolation check needs \"gamma\"");
    result = check_report_to_json(
        check_interpolation_inequality(g, d, A, B, cfg.at("gamma").get<long long>()));
  } else if (a.kind == "desired") {
    // Worst instance over every matching x labeling with both sides populated.
    std::optional<DesiredInequalityReport> worst;
    visit_matchings(d, false, [&](std::span<const HalfEdgePair> pairs) {
      const Matching m = Matching::from_pairs(d, {pairs.begin(), pairs.end()});
      const std::size_t E = pairs.size();
      for (std::uint32_t omega = 0; omega < (1u << E); ++omega) {
        std::vector<int> labels(E);
        for (std::size_t e = 0; e < E; ++e) labels[e] = (omega >> e) & 1u ? 1 : -1;
        const ClassDecomposition dec = half_edge_classes(m, labels, A, B);
        if (dec.a < 1 || dec.b < 1) continue;
        const DesiredInequalityReport rep = check_desired_inequality(dec, p);
        if (!worst || rep.report.slack < worst->report.slack) worst = rep;
      }
    });
    if (!worst) throw feasibility_error("no decomposition uses both sides");
    result = desired_report_to_json(*worst);
  } else if (a.kind == "subadditivity") {
    const std::string mode = cfg.value("mode", "exact");
    if (mode != "exact" && mode != "mc") throw config_error("mode must be exact or mc");
    SubadditivityOptions opts;
    opts.graph_samples = cfg.value("graph_samples", opts.graph_samples);
    opts.labeling_samples = cfg.value("labeling_samples", opts.labeling_samples);
    opts.seed = a.seed;
    opts.threads = a.threads;
    result = check_report_to_json(check_subadditivity(
        d, A, B, p, mode == "exact" ? EstimateMode::exact : EstimateMode::monte_carlo, opts));
  } else if (a.kind == "corollary") {
    result = check_report_to_json(check_corollary_average(g, d, A, B));
  } else {
    throw config_error("unknown check kind " + a.kind);
  }
  emit_json(result, a.out);
  return 0;
}

struct ExperimentArgs {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  std::string out;
  bool timings = false;
};

int run_experiment_cmd(const ExperimentArgs& a) {
  ExperimentConfig cfg = experiment_config_from_json(load_json_file(a.config));
  if (a.seed) cfg.master_seed = *a.seed;
  if (a.threads) cfg.threads = *a.threads;
  if (!a.out.empty()) cfg.output = a.out;
  if (a.timings) cfg.timings = true;

  const ExperimentOutcome outcome = run_experiment(cfg);
  if (cfg.output.empty()) {
    if (cfg.format == "plotdata") throw config_error("plotdata needs an output path");
    std::cout << (cfg.format == "csv" ? render_csv(outcome.records)
                                      : render_jsonl(outcome.records));
    return 0;
  }
  const std::vector<std::string> files = emit_outputs(outcome, cfg.format, cfg.output);
  Json summary = Json::array();
  for (const SummaryRow& row : outcome.summary)
    summary.push_back(Json{{"n", row.n},
                           {"replicas", row.replicas},
                           {"mean_value_per_n", row.mean_value_per_n},
                           {"stderr", row.stderror}});
  std::cout << Json{{"files", files}, {"summary", std::move(summary)},
                    {"details", outcome.details}}
                   .dump(2)
            << "\n";
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"Signed bisections of configuration-model multigraphs"};
  app.require_subcommand(1);

  GenArgs gen;
  CLI::App* sgen = app.add_subcommand("gen", "Sample a multigraph and print it as JSON");
  sgen->add_option("--n", gen.n, "Number of vertices");
  sgen->add_option("--regular", gen.regular, "Every vertex gets this degree");
  sgen->add_option("--poisson", gen.lambda, "Truncated-Poisson mean degree parameter");
  sgen->add_option("--truncation", gen.truncation, "Poisson support cutoff");
  sgen->add_option("--masses", gen.masses, "Histogram masses for degrees 0,1,...")
      ->delimiter(',');
  sgen->add_option("--degrees", gen.degrees, "Explicit degree sequence")->delimiter(',');
  sgen->add_option("--config", gen.config, "Degree model as a JSON file");
  sgen->add_option("--matching", gen.matching, "complete (default) or maximum");
  sgen->add_option("--seed", gen.seed, "Seed");
  sgen->add_option("--out", gen.out, "Write here instead of stdout");

  CutArgs cut;
  CLI::App* scut = app.add_subcommand("cut", "Solve a cut objective on a graph file");
  scut->add_option("--graph", cut.graph, "Graph JSON file")->required();
  scut->add_option("--objective", cut.objective,
                   "max-cut | max-bisection | min-bisection | constrained-max-bisection | "
                   "alpha-cut");
  scut->add_option("--side-a", cut.side_a, "Group A vertices")->delimiter(',');
  scut->add_option("--side-b", cut.side_b, "Group B vertices")->delimiter(',');
  scut->add_option("--alpha", cut.alpha, "Side-1 share for alpha-cut");
  scut->add_option("--sense", cut.sense, "alpha-cut direction: max (default) or min");
  scut->add_option("--out", cut.out, "Write here instead of stdout");

  HybridArgs hyb;
  CLI::App* shyb = app.add_subcommand("hybrid", "Hybrid value of a graph file");
  shyb->add_option("--graph", hyb.graph, "Graph JSON file")->required();
  shyb->add_option("--p", hyb.p, "Probability of a +1 edge label")->required();
  shyb->add_option("--mode", hyb.mode, "auto (default) | exact | mc");
  shyb->add_option("--samples", hyb.samples, "Labelings drawn in mc mode");
  shyb->add_option("--seed", hyb.seed, "Seed");
  shyb->add_option("--side-a", hyb.side_a, "Constrain group A")->delimiter(',');
  shyb->add_option("--side-b", hyb.side_b, "Constrain group B")->delimiter(',');
  shyb->add_option("--out", hyb.out, "Write here instead of stdout");

  InterpArgs interp;
  CLI::App* sint = app.add_subcommand("interp-check", "Run one interpolation-step check");
  sint->add_option("--kind", interp.kind,
                   "lipschitz | superadd | interpolation | desired | subadditivity | corollary")
      ->required();
  sint->add_option("--config", interp.config, "Check instance as a JSON file")->required();
  sint->add_option("--seed", interp.seed, "Seed");
  sint->add_option("--threads", interp.threads, "Worker threads");
  sint->add_option("--out", interp.out, "Write here instead of stdout");

  ExperimentArgs exp;
  CLI::App* sexp = app.add_subcommand("experiment", "Run a configured experiment");
  sexp->add_option("--config", exp.config, "Experiment JSON file")->required();
  sexp->add_option("--seed", exp.seed, "Override master_seed");
  sexp->add_option("--threads", exp.threads, "Worker threads");
  sexp->add_option("--out", exp.out, "Override the configured output path");
  sexp->add_flag("--timings", exp.timings, "Record wall time per replica");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n\n" << app.help() << std::flush;
    return 2;
  }

  try {
    if (sgen->parsed()) return run_gen(gen);
    if (scut->parsed()) return run_cut(cut);
    if (shyb->parsed()) return run_hybrid(hyb);
    if (sint->parsed()) return run_interp_check(interp);
    if (sexp->parsed()) return run_experiment_cmd(exp);
    return 2;
  } catch (const guard_error& e) {
    std::cerr << "refused: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

int run_cli(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run_cli(args);
}

}  // namespace bisect
