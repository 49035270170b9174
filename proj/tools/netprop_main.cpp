// netprop: graph-Laplacian semi-supervised label propagation over an
// equal-weight integrated multi-network, with a cross-validation harness.
//
// Subcommands: integrate, predict, evaluate, gen-synthetic.
// Exit codes: 0 success, 1 runtime/data error, 2 usage error.

#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "netprop/errors.hpp"
#include "netprop/eval.hpp"
#include "netprop/io.hpp"
#include "netprop/kernels.hpp"
#include "netprop/operators.hpp"
#include "netprop/solvers.hpp"
#include "netprop/synthetic.hpp"

namespace {

using netprop::AffinityParams;
using netprop::AffinityExponent;
using netprop::index_t;

struct RunConfig {
  std::vector<std::string> network_specs;
  std::string node_list;
  std::string output;
  std::string method = "sym";
  bool all_methods = false;

  netprop::SolverParams params;
  int folds = 3;
  std::uint64_t seed = 42;

  // Kernel settings, used when a network input is `features:<path>`.
  double sigma = 1.0;
  std::string kernel_exponent = "norm";
  double affinity_floor = 1e-12;

  std::string annotations;
  std::string labels;

  AffinityParams affinity() const {
    AffinityParams a;
    a.sigma = sigma;
    a.exponent = kernel_exponent == "norm-squared" ? AffinityExponent::norm_squared
                                                   : AffinityExponent::norm;
    a.floor = affinity_floor;
    return a;
  }
};

std::string join(const std::vector<std::string>& parts, char sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i > 0) out += sep;
    out += parts[i];
  }
  return out;
}

std::string format_g(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

netprop::io::HeaderBlock common_header(const std::string& command, const RunConfig& cfg) {
  netprop::io::HeaderBlock header;
  header.emplace_back("command", command);
  header.emplace_back("networks", join(cfg.network_specs, ','));
  if (!cfg.node_list.empty()) header.emplace_back("node_list", cfg.node_list);
  header.emplace_back("method", cfg.all_methods ? "all" : cfg.method);
  header.emplace_back("alpha", format_g(cfg.params.alpha));
  header.emplace_back("gamma", format_g(cfg.params.gamma));
  header.emplace_back("tol", format_g(cfg.params.tol));
  header.emplace_back("max_iter", std::to_string(cfg.params.max_iter));
  header.emplace_back("folds", std::to_string(cfg.folds));
  header.emplace_back("seed", std::to_string(cfg.seed));
  header.emplace_back("sigma", format_g(cfg.sigma));
  header.emplace_back("kernel_exponent", cfg.kernel_exponent);
  header.emplace_back("affinity_floor", format_g(cfg.affinity_floor));
  return header;
}

// Output stream choice: file when --output was given, stdout otherwise.
class OutputTarget {
 public:
  explicit OutputTarget(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw netprop::Error("cannot write file: " + path);
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

netprop::NetworkCollection load_networks(const RunConfig& cfg) {
  std::vector<netprop::io::NetworkSource> sources;
  sources.reserve(cfg.network_specs.size());
  for (const auto& spec : cfg.network_specs) {
    sources.push_back(netprop::io::parse_network_source(spec));
  }
  return netprop::io::load_collection(sources, cfg.node_list, cfg.affinity());
}

netprop::PropagationOperator build_operator(const netprop::NetworkCollection& coll,
                                            const std::string& method) {
  if (method == "rw" || method == "rw-clamped") return netprop::integrate_random_walk(coll);
  if (method == "sym") return netprop::integrate_symmetric(coll);
  if (method == "unnorm") return netprop::integrate_unnormalized(coll);
  if (method == "sym-reg") return netprop::integrate_sym_laplacian(coll);
  throw netprop::Error("unknown method tag: " + method);
}

int run_integrate(const RunConfig& cfg) {
  const netprop::NetworkCollection coll = load_networks(cfg);
  const netprop::PropagationOperator op = build_operator(coll, cfg.method);

  OutputTarget target(cfg.output);
  std::ostream& os = target.stream();
  netprop::io::write_header(os, common_header("integrate", cfg));

  const std::vector<double> sums = op.matrix.row_sums();
  double lo = sums.empty() ? 0.0 : sums.front();
  double hi = lo;
  for (const double s : sums) {
    lo = std::min(lo, s);
    hi = std::max(hi, s);
  }
  const double asym = op.matrix.max_asymmetry();

  char buf[64];
  os << "kind = " << netprop::to_string(op.kind) << "\n";
  os << "n = " << op.n << "\n";
  os << "m = " << op.m << "\n";
  os << "nnz = " << op.matrix.nnz() << "\n";
  std::snprintf(buf, sizeof(buf), "%.17g", lo);
  os << "row_sum_min = " << buf << "\n";
  std::snprintf(buf, sizeof(buf), "%.17g", hi);
  os << "row_sum_max = " << buf << "\n";
  std::snprintf(buf, sizeof(buf), "%.17g", asym);
  os << "max_asymmetry = " << buf << "\n";
  os << "symmetric = " << (asym == 0.0 ? "true" : "false") << "\n";
  return 0;
}

int run_predict(const RunConfig& cfg) {
  const netprop::NetworkCollection coll = load_networks(cfg);
  const netprop::io::LabeledSplit split =
      netprop::io::load_labeled_split(cfg.labels, coll.node_names);
  const netprop::PropagationOperator op = build_operator(coll, cfg.method);

  netprop::SolveResult solved;
  if (cfg.method == "rw" || cfg.method == "sym") {
    solved = netprop::solve_closed_form(op, split.Y, cfg.params.alpha);
  } else if (cfg.method == "unnorm") {
    solved = netprop::solve_unnormalized(op, split.Y, cfg.params.gamma);
  } else if (cfg.method == "sym-reg") {
    solved = netprop::solve_normalized_regularized(op, split.Y, cfg.params.gamma);
  } else {
    solved = netprop::propagate_clamped(op, split.Y, split.train_mask, cfg.params);
    if (!solved.converged) {
      throw netprop::Error("propagation did not converge after " +
                           std::to_string(solved.iterations) +
                           " iterations (last update " + format_g(solved.residual) + ")");
    }
  }

  const std::vector<std::int8_t> signs = netprop::predict(solved.F);
  OutputTarget target(cfg.output);
  std::ostream& os = target.stream();
  netprop::io::write_header(os, common_header("predict", cfg));
  os << "node\tclass\tscore\tprediction\n";
  for (index_t i = 0; i < solved.F.n; ++i) {
    for (index_t j = 0; j < solved.F.c; ++j) {
      os << coll.node_names[i] << '\t' << split.class_names[j] << '\t'
         << netprop::io::format_double(solved.F.at(i, j), 4) << '\t'
         << (signs[static_cast<std::size_t>(i) * solved.F.c + j] > 0 ? "+1" : "-1") << "\n";
    }
  }
  return 0;
}

int run_evaluate(const RunConfig& cfg) {
  const netprop::NetworkCollection coll = load_networks(cfg);
  const netprop::AnnotationSet ann =
      netprop::io::load_annotations(cfg.annotations, coll.node_names);

  std::vector<std::string> methods;
  if (cfg.all_methods) {
    methods = {"sym", "rw", "unnorm"};  // table layout: normalized, random walk, un-normalized
  } else {
    methods = {cfg.method};
  }

  std::vector<netprop::EvalReport> reports;
  reports.reserve(methods.size());
  for (const auto& tag : methods) {
    netprop::EvalReport report = netprop::cross_validate(
        coll, ann, netprop::parse_method(tag), cfg.params, cfg.folds, cfg.seed);
    report.networks = join(cfg.network_specs, ',');
    reports.push_back(std::move(report));
  }

  netprop::io::HeaderBlock header = common_header("evaluate", cfg);
  header.emplace_back("annotations", cfg.annotations);
  for (const auto& report : reports) {
    header.emplace_back("non_converged_folds_" + report.method,
                        std::to_string(report.non_converged_folds));
  }

  OutputTarget target(cfg.output);
  if (cfg.all_methods) {
    netprop::io::write_comparison(target.stream(), reports, header);
  } else {
    netprop::io::write_report(target.stream(), reports.front(), header);
  }
  return 0;
}

int run_gen_synthetic(const netprop::SyntheticParams& params, const std::string& outdir) {
  netprop::write_dataset(outdir, params);
  std::cout << "wrote " << outdir << "/nodes.txt\n";
  for (int k = 1; k <= params.networks; ++k) {
    std::cout << "wrote " << outdir << "/network_" << k << ".tsv\n";
  }
  std::cout << "wrote " << outdir << "/annotations.tsv\n";
  return 0;
}

const std::vector<std::string> kAllMethods = {"rw", "sym", "unnorm", "sym-reg", "rw-clamped"};
const std::vector<std::string> kOperatorMethods = {"rw", "sym", "unnorm", "sym-reg"};

CLI::Validator open_unit_interval() {
  return CLI::Validator(
      [](std::string& value) -> std::string {
        const double v = std::atof(value.c_str());
        if (v > 0.0 && v < 1.0) return {};
        return "value must lie strictly between 0 and 1";
      },
      "FLOAT in (0,1)");
}

CLI::Validator positive_real() {
  return CLI::Validator(
      [](std::string& value) -> std::string {
        const double v = std::atof(value.c_str());
        if (v > 0.0) return {};
        return "value must be positive";
      },
      "FLOAT > 0");
}

void add_kernel_options(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--sigma", cfg.sigma, "affinity bandwidth for features: inputs")
      ->check(positive_real())
      ->capture_default_str();
  cmd->add_option("--kernel-exponent", cfg.kernel_exponent,
                  "affinity exponent: norm or norm-squared")
      ->check(CLI::IsMember({"norm", "norm-squared"}))
      ->capture_default_str();
  cmd->add_option("--affinity-floor", cfg.affinity_floor,
                  "drop affinity entries below this value")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
}

void add_solver_options(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--alpha", cfg.params.alpha, "propagation mixing weight")
      ->check(open_unit_interval())
      ->capture_default_str();
  cmd->add_option("--gamma", cfg.params.gamma, "regularization weight")
      ->check(positive_real())
      ->capture_default_str();
  cmd->add_option("--tol", cfg.params.tol, "iteration convergence tolerance")
      ->check(positive_real())
      ->capture_default_str();
  cmd->add_option("--max-iter", cfg.params.max_iter, "iteration cap")
      ->check(CLI::Range(1, 1000000000))
      ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"graph-Laplacian semi-supervised label propagation over integrated networks"};
  app.require_subcommand(1);
  app.set_config("--config", "", "read defaults from a TOML-style config file");
  app.set_version_flag("--version", "netprop 1.0.0");

  RunConfig cfg;
  netprop::SyntheticParams synth;
  std::string synth_outdir;

  CLI::App* integrate = app.add_subcommand(
      "integrate", "build an integrated operator and print its statistics");
  integrate->add_option("networks", cfg.network_specs,
                        "edge-list files (or features:<path>)")
      ->required()
      ->expected(-1);
  integrate->add_option("--node-list", cfg.node_list, "file fixing the node universe");
  integrate->add_option("--method", cfg.method, "operator to build")
      ->check(CLI::IsMember(kOperatorMethods))
      ->capture_default_str();
  integrate->add_option("--output", cfg.output, "write to file instead of stdout");
  add_kernel_options(integrate, cfg);

  CLI::App* predict = app.add_subcommand(
      "predict", "propagate labels for one train/test split and write scores");
  predict->add_option("networks", cfg.network_specs, "edge-list files (or features:<path>)")
      ->required()
      ->expected(-1);
  predict->add_option("--labels", cfg.labels, "labels file: node  train  class columns")
      ->required();
  predict->add_option("--node-list", cfg.node_list, "file fixing the node universe");
  predict->add_option("--method", cfg.method, "solver to run")
      ->check(CLI::IsMember(kAllMethods))
      ->capture_default_str();
  predict->add_option("--output", cfg.output, "write to file instead of stdout");
  add_solver_options(predict, cfg);
  add_kernel_options(predict, cfg);

  CLI::App* evaluate = app.add_subcommand(
      "evaluate", "k-fold cross-validation accuracy per class");
  evaluate->add_option("networks", cfg.network_specs, "edge-list files (or features:<path>)")
      ->required()
      ->expected(-1);
  evaluate->add_option("--annotations", cfg.annotations, "ground-truth membership TSV")
      ->required();
  evaluate->add_option("--node-list", cfg.node_list, "file fixing the node universe");
  evaluate->add_option("--method", cfg.method, "solver to run")
      ->check(CLI::IsMember(kAllMethods))
      ->capture_default_str();
  evaluate->add_flag("--all-methods", cfg.all_methods,
                     "run sym, rw and unnorm and emit a comparison table");
  evaluate->add_option("--folds", cfg.folds, "fold count (k >= 2)")
      ->check(CLI::Range(2, 1000000))
      ->capture_default_str();
  evaluate->add_option("--seed", cfg.seed, "fold-assignment seed")->capture_default_str();
  evaluate->add_option("--output", cfg.output, "write to file instead of stdout");
  add_solver_options(evaluate, cfg);
  add_kernel_options(evaluate, cfg);

  CLI::App* gen = app.add_subcommand(
      "gen-synthetic", "write a planted-partition multi-network dataset");
  gen->add_option("--outdir", synth_outdir, "output directory")->required();
  gen->add_option("--n", synth.n, "node count")->check(CLI::Range(2, 100000000))
      ->capture_default_str();
  gen->add_option("--clusters", synth.clusters, "cluster (= class) count")
      ->check(CLI::Range(1, 1000000))
      ->capture_default_str();
  gen->add_option("--networks", synth.networks, "number of networks")
      ->check(CLI::Range(1, 10000))
      ->capture_default_str();
  gen->add_option("--retention", synth.retention, "per-network base-edge retention probability")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  gen->add_option("--within-density", synth.within_density,
                  "base within-cluster edge probability")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  gen->add_option("--between-density", synth.between_density,
                  "base cross-cluster edge probability")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  gen->add_option("--seed", synth.seed, "generator seed")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;  // usage error
  }

  try {
    if (integrate->parsed()) return run_integrate(cfg);
    if (predict->parsed()) return run_predict(cfg);
    if (evaluate->parsed()) return run_evaluate(cfg);
    if (gen->parsed()) return run_gen_synthetic(synth, synth_outdir);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
