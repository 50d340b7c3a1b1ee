#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>

#include "cggm/bayes.hpp"
#include "cggm/cer_analysis.hpp"
#include "cggm/errors.hpp"
#include "cggm/io.hpp"
#include "cggm/normalizer.hpp"
#include "cggm/oracle.hpp"

using namespace cggm;

namespace {

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw input_error("cannot open " + path);
  return json::parse(in);
}

void print(const json& j) { std::cout << j.dump(2) << "\n"; }

double tolerance(double fallback) {
  if (const char* env = std::getenv("CGGM_TOL")) {
    char* end = nullptr;
    const double v = std::strtod(env, &end);
    if (end == env || *end != '\0' || !(v > 0.0)) throw input_error("CGGM_TOL must be a positive number");
    return v;
  }
  return fallback;
}

// A graph or raw-space input, analysed into a BC model.  Matrices supplied by the
// user are in the input's own vertex numbering.
struct Loaded {
  std::optional<GraphModel> graph;
  std::optional<ColoredGraph> source;
  BcModel model;

  Matrix to_model(const Matrix& x) const { return graph ? graph->to_model(x) : x; }
  int p() const { return model.space.p(); }
};

Loaded load(const std::string& path, std::uint64_t seed) {
  const json j = read_json(path);
  if (is_space_json(j)) return Loaded{std::nullopt, std::nullopt, analyze_space(space_from_json(j), seed)};
  if (!is_graph_json(j)) throw input_error("input is neither a graph nor a space description");
  auto g = graph_from_json(j);
  auto gm = build_graph_model(g, seed);
  auto model = gm.model;
  return Loaded{std::move(gm), std::move(g), std::move(model)};
}

Matrix matrix_option(const std::string& value, int p) {
  if (value.empty() || value == "identity") return Matrix::Identity(p, p);
  return matrix_from_json(read_json(value), p);
}

int run_classify(const std::string& path) {
  const auto g = graph_from_json(read_json(path));
  const auto v = classify(g);
  print(verdict_to_json(g, v));
  return v.is_cer() ? 0 : 2;
}

int run_rcop(const std::string& path) {
  const auto in = rcop_from_json(read_json(path));
  print(graph_to_json(rcop_coloring(in.p, in.edges, in.generators)));
  return 0;
}

int run_constants(const std::string& path, std::uint64_t seed, bool dump) {
  const auto l = load(path, seed);
  json j = constants_to_json(l.model.constants, l.model.frames, dump);
  if (l.graph) {
    j["verdict"] = to_string(l.graph->verdict.kind);
    j["eta"] = *l.graph->verdict.ordering;
    j["vertex_order"] = l.graph->relabeling.old_of_new;
  }
  print(j);
  return 0;
}

struct NormalizeArgs {
  std::optional<double> s, delta;
  std::string a, d;
  std::uint64_t seed = 0;
};

int run_normalize(const std::string& path, const NormalizeArgs& args) {
  if (args.s.has_value() == args.delta.has_value()) throw input_error("give exactly one of --s and --delta");
  const auto l = load(path, args.seed);
  NormalizerResult r;
  if (args.s) {
    r = log_integral(l.model, *args.s, l.to_model(matrix_option(args.a, l.p())));
  } else {
    r = dy_log_normalizer(l.model, *args.delta, l.to_model(matrix_option(args.d, l.p())));
  }
  print(normalizer_to_json(r));
  return 0;
}

struct ScoreArgs {
  std::string models, data, d;
  double delta = 3.0;
  bool header = false;
  std::uint64_t seed = 0;
};

int run_score(const ScoreArgs& args) {
  const auto models = models_from_json(read_json(args.models));
  if (models.empty()) throw input_error("model list is empty");
  const int p = models[0].graph.p();
  for (const auto& m : models)
    if (m.graph.p() != p) throw input_error("all models must share the same p");
  std::ifstream in(args.data);
  if (!in) throw input_error("cannot open " + args.data);
  const auto stats = ingest_data(read_csv(in, args.header), p);
  DYPrior prior;
  prior.delta = args.delta;
  if (!args.d.empty()) prior.d = matrix_option(args.d, p);
  const auto ranked = compare_models(models, prior, stats, args.seed);
  json rows = json::array();
  for (const auto& r : ranked) {
    json row{{"name", r.name}, {"index", r.index + 1}, {"ok", r.ok}, {"verdict", r.verdict},
             {"runtime_ms", round_sig(r.runtime_ms, 4)}};
    if (r.ok) {
      row["log_score"] = round_sig(r.log_score);
      row["threshold"] = round_sig(r.threshold);
    } else {
      row["error"] = r.error;
    }
    rows.push_back(row);
  }
  print(json{{"n", stats.n}, {"delta", args.delta}, {"models", rows}});
  return 0;
}

struct ValidateArgs {
  double s = 1.0;
  std::string a;
  std::size_t samples = 1000000;
  std::uint64_t seed = 0;
  int threads = 1;
};

int run_validate(const std::string& path, const ValidateArgs& args) {
  const auto l = load(path, args.seed);
  const Matrix a = l.to_model(matrix_option(args.a, l.p()));
  const double engine = log_integral(l.model, args.s, a).log_value;
  const double tol = tolerance(1e-8);

  json oracles = json::array();
  bool pass = true;
  auto add = [&](const std::string& name, const Comparison& c, json extra) {
    json j = comparison_to_json(c);
    j["oracle_name"] = name;
    j.update(extra);
    oracles.push_back(j);
    pass &= c.pass;
  };

  McOptions mo;
  mo.samples = args.samples;
  mo.seed = args.seed;
  mo.threads = args.threads;
  const auto mc = mc_integral(l.model.space, args.s, a, mo);
  add("monte_carlo", compare(engine, mc.log_estimate, mc.stderr_log),
      {{"samples", mc.samples}, {"seed", args.seed}, {"threads", args.threads}, {"ess", round_sig(mc.ess, 6)}});
  if (l.model.space.dim() <= 3)
    add("quadrature", compare(engine, quadrature_integral(l.model.space, args.s, a), std::nullopt, std::max(tol, 1e-6)),
        json::object());
  if (l.source && l.source->r() == l.p() && l.source->R() == static_cast<int>(l.source->edges().size())) {
    // classical formula, with delta = 2s + 2 and D = 2A in the input numbering
    const double oracle = decomposable_gwishart_log(*l.source, 2 * args.s + 2, 2 * matrix_option(args.a, l.p()));
    add("clique_separator", compare(engine, oracle, std::nullopt, tol), json::object());
  }
  print(json{{"engine", round_sig(engine)},
             {"s", args.s},
             {"dim", l.model.space.dim()},
             {"measure", "orthonormal coordinates"},
             {"oracles", oracles},
             {"pass", pass}});
  return pass ? 0 : 4;
}

int run_cholesky(const std::string& path, const std::string& xfile, std::uint64_t seed) {
  const auto l = load(path, seed);
  const Matrix x = l.to_model(matrix_option(xfile, l.p()));
  const auto c = generalized_cholesky(l.model, x, tolerance(1e-10));
  json j = cholesky_to_json(c);
  if (l.graph) j["vertex_order"] = l.graph->relabeling.old_of_new;
  print(j);
  return 0;
}

int report(const std::string& kind, const std::string& what, int code) {
  std::cerr << "cggm: " << kind << ": " << what << "\n";
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Colored Gaussian graphical models: CER classification and closed-form normalizing constants"};
  app.require_subcommand(1);

  std::string input;
  std::uint64_t seed = 0;
  bool dump = false;
  NormalizeArgs nargs;
  ScoreArgs sargs;
  ValidateArgs vargs;
  std::string xfile;

  auto* classify_cmd = app.add_subcommand("classify", "Classify a colored graph");
  classify_cmd->add_option("graph", input, "graph JSON")->required();

  auto* rcop_cmd = app.add_subcommand("rcop", "Orbit coloring of a graph under a permutation group");
  rcop_cmd->add_option("graph", input, "graph JSON with generators")->required();

  auto* constants_cmd = app.add_subcommand("constants", "Structure constants of a CER graph or BC-space");
  constants_cmd->add_option("input", input, "graph or space JSON")->required();
  constants_cmd->add_option("--seed", seed, "random seed");
  constants_cmd->add_flag("--dump", dump, "include Jordan frames");

  auto* normalize_cmd = app.add_subcommand("normalize", "Closed-form log integral or DY normalizing constant");
  normalize_cmd->add_option("input", input, "graph or space JSON")->required();
  normalize_cmd->add_option("--s", nargs.s, "exponent s of det(x)^s exp(-tr(Ax))");
  normalize_cmd->add_option("--delta", nargs.delta, "DY shape delta (uses s = (delta-2)/2, A = D/2)");
  normalize_cmd->add_option("--A", nargs.a, "JSON matrix file for A, or 'identity'");
  normalize_cmd->add_option("--D", nargs.d, "JSON matrix file for D, or 'identity'");
  normalize_cmd->add_option("--seed", nargs.seed, "random seed");

  auto* score_cmd = app.add_subcommand("score", "Rank models by posterior score");
  score_cmd->add_option("models", sargs.models, "JSON array of graphs")->required();
  score_cmd->add_option("data", sargs.data, "CSV data, one observation per row")->required();
  score_cmd->add_option("--delta", sargs.delta, "DY shape delta");
  score_cmd->add_option("--D", sargs.d, "JSON matrix file for D, or 'identity'");
  score_cmd->add_flag("--header", sargs.header, "first CSV line is a header");
  score_cmd->add_option("--seed", sargs.seed, "random seed");

  auto* validate_cmd = app.add_subcommand("validate", "Compare the closed form with numerical oracles");
  validate_cmd->add_option("input", input, "graph or space JSON")->required();
  validate_cmd->add_option("--s", vargs.s, "exponent s");
  validate_cmd->add_option("--A", vargs.a, "JSON matrix file for A, or 'identity'");
  validate_cmd->add_option("--samples", vargs.samples, "Monte Carlo sample count");
  validate_cmd->add_option("--seed", vargs.seed, "random seed");
  validate_cmd->add_option("--threads", vargs.threads, "Monte Carlo worker threads");

  auto* cholesky_cmd = app.add_subcommand("cholesky", "Generalized Cholesky coordinates of a PD element");
  cholesky_cmd->add_option("input", input, "graph or space JSON")->required();
  cholesky_cmd->add_option("--x", xfile, "JSON matrix file for x")->required();
  cholesky_cmd->add_option("--seed", seed, "random seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*classify_cmd) return run_classify(input);
    if (*rcop_cmd) return run_rcop(input);
    if (*constants_cmd) return run_constants(input, seed, dump);
    if (*normalize_cmd) return run_normalize(input, nargs);
    if (*score_cmd) return run_score(sargs);
    if (*validate_cmd) return run_validate(input, vargs);
    if (*cholesky_cmd) return run_cholesky(input, xfile, seed);
  } catch (const input_error& e) {
    return report("input error", e.what(), 1);
  } catch (const json::exception& e) {
    return report("input error", e.what(), 1);
  } catch (const group_too_large& e) {
    return report("input error", e.what(), 1);
  } catch (const classification_error& e) {
    return report("classification", e.what(), 2);
  } catch (const divergence_error& e) {
    print(json{{"error", "divergent"}, {"threshold", round_sig(e.threshold)}});
    return report("divergence", e.what(), 3);
  } catch (const validation_error& e) {
    return report("validation failed", e.what(), 4);
  } catch (const numerical_error& e) {
    return report("numerical self-check failed", e.what(), 4);
  }
  return 1;
}
