#include "app.hpp"

#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "csv.hpp"
#include "esdr/error.hpp"
#include "esdr/order.hpp"
#include "esdr/pipeline.hpp"
#include "esdr/simgen.hpp"
#include "experiments.hpp"
#include "report.hpp"
#include "worker_pool.hpp"

namespace esdr::cli {
namespace {

const std::vector<std::string> kMethods{"opg", "mave", "rmave"};
const std::vector<std::string> kFamilies{"cf", "boxcox", "haar", "slice", "poly", "kde"};
const std::vector<std::string> kKernels{"biweight", "gaussian"};

// Estimator settings shared by `fit` and `bench`.
struct TuningFlags {
  FitConfig config;
  std::string kernel = "biweight";
  bool no_standardize = false;
  bool raw_response = false;

  void attach(CLI::App& cmd) {
    cmd.add_option("--kernel", kernel, "Smoothing kernel")->check(CLI::IsMember(kKernels))->capture_default_str();
    cmd.add_flag("--no-standardize", no_standardize, "Fit on raw predictors instead of standardized ones");
    cmd.add_flag("--raw-response", raw_response, "Evaluate the characteristic family on unscaled responses");
    cmd.add_option("--trim-quantile", config.trim_quantile, "Density quantile below which points are trimmed")
        ->capture_default_str();
    cmd.add_option("--varsigma", config.varsigma, "Bandwidth shrink factor in (1/2, 1)")->capture_default_str();
    cmd.add_option("--c0", config.c0, "Pilot bandwidth constant")->capture_default_str();
    cmd.add_option("--hbar0", config.hbar0, "Final bandwidth constant")->capture_default_str();
    cmd.add_option("--tol", config.tol, "Convergence threshold on the projection change")->capture_default_str();
    cmd.add_option("--max-outer-iter", config.max_outer_iter, "Bandwidth stages of the refined estimator")
        ->capture_default_str();
  }

  FitConfig resolve() const {
    FitConfig cfg = config;
    cfg.kernel = *parse_kernel(kernel);
    cfg.standardize_predictors = !no_standardize;
    cfg.standardize_response = !raw_response;
    const auto errors = validate_config(cfg);
    if (!errors.empty()) throw Error("invalid configuration: " + errors.front());
    return cfg;
  }
};

struct FitOptions {
  std::string input;
  std::vector<std::string> response_cols;
  std::string method = "rmave";
  std::string family = "cf";
  int m = 15;
  std::string dim = "auto";
  int d_max = -1;
  int haar_level = 3;
  std::uint64_t seed = 0;
  std::string output;
  TuningFlags tuning;
};

struct BenchOptions {
  std::string experiment;
  std::vector<std::string> models;
  std::vector<Index> n;
  std::vector<Index> p;
  std::vector<int> m;
  std::string method;
  std::string family;
  int replicates = 20;
  std::uint64_t seed = 0;
  std::string out_dir = "results";
  TuningFlags tuning;
};

struct GenerateOptions {
  std::string model;
  Index n = -1;
  Index p = -1;
  std::uint64_t seed = 0;
  std::string output;
  std::string basis_output;
};

void write_text(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream file(path);
  if (!file) throw Error("cannot write '" + path + "'");
  file << text;
}

int run_fit(const FitOptions& opt, std::ostream& out) {
  FitConfig cfg = opt.tuning.resolve();
  cfg.m = opt.m;
  cfg.seed = opt.seed;
  if (cfg.m < 1) throw Error("ensemble size must be ≥ 1");
  const Dataset data = dataset_from_table(read_csv(opt.input), opt.response_cols);

  FamilySpec family{*parse_family(opt.family)};
  family.haar_level = opt.haar_level;
  const Method method = *parse_method(opt.method);

  std::optional<CvCurve> curve;
  Index d = 0;
  if (opt.dim == "auto") {
    const Index d_max = opt.d_max >= 0 ? opt.d_max : default_max_dimension(data.p());
    if (d_max > data.p()) throw Error("--d-max exceeds the number of predictors");
    curve = estimate_dimension(data, family, cfg, d_max);
    d = curve->d_hat;
  } else {
    std::size_t used = 0;
    long value = -1;
    try {
      value = std::stol(opt.dim, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != opt.dim.size() || value < 1) throw Error("--dim must be a positive integer or 'auto'");
    if (value > data.p())
      throw Error("--dim " + opt.dim + " exceeds the number of predictors (" + std::to_string(data.p()) + ")");
    d = value;
  }

  std::optional<FitResult> fit;
  if (d > 0) fit = fit_dataset(data, family, method, d, cfg);
  const nlohmann::json report = fit_report({cfg, method, family, data.n(), data.p(), data.s(), d,
                                            fit ? &*fit : nullptr, curve ? &*curve : nullptr});
  write_text(opt.output, report.dump(2) + "\n", out);
  return exit_ok;
}

int run_bench(const BenchOptions& opt, std::ostream& out) {
  ExperimentSpec spec;
  spec.name = opt.experiment;
  spec.models = opt.models;
  spec.n = opt.n;
  spec.p = opt.p;
  spec.m = opt.m;
  if (!opt.method.empty()) spec.method = parse_method(opt.method);
  if (!opt.family.empty()) spec.family = parse_family(opt.family);
  spec.replicates = opt.replicates;
  spec.seed = opt.seed;
  spec.threads = worker_count();
  spec.config = opt.tuning.resolve();
  build_cells(spec);  // validate before spending time

  const ResultTable table = run_experiment(spec);
  write_result_files(table, spec, opt.out_dir);
  print_table(out, table);
  out << "results written to " << opt.out_dir << "/" << table.experiment << ".{csv,json}\n";
  return table.failures() > 0 ? exit_partial : exit_ok;
}

int run_generate(const GenerateOptions& opt, std::ostream& out) {
  const auto model = parse_model(opt.model);
  if (!model) throw Error("unknown model '" + opt.model + "'");
  const ModelInfo& info = model_info(*model);
  const Simulated sim = generate({*model, opt.n > 0 ? opt.n : info.default_n, opt.p > 0 ? opt.p : info.default_p,
                                  opt.seed});
  Matrix table(sim.data.n(), sim.data.p() + sim.data.s());
  table << sim.data.x(), sim.data.y();
  std::ostringstream csv;
  write_csv(csv, default_header(sim.data.p(), sim.data.s()), table);
  write_text(opt.output, csv.str(), out);
  if (!opt.basis_output.empty()) {
    std::vector<std::string> header;
    for (Index c = 1; c <= sim.b0.d(); ++c) header.push_back("b" + std::to_string(c));
    std::ostringstream basis;
    write_csv(basis, header, sim.b0.matrix());
    write_text(opt.basis_output, basis.str(), out);
  }
  return exit_ok;
}

int run_models(std::ostream& out) {
  out << "name    d0  n    p   s  m      formula\n";
  for (const auto& info : list_models()) {
    out << std::left << std::setw(8) << info.name << std::setw(4) << info.d0 << std::setw(5) << info.default_n
        << std::setw(4) << info.default_p << std::setw(3) << info.s << std::setw(7) << info.default_m << info.formula
        << '\n';
  }
  return exit_ok;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Ensemble sufficient dimension reduction: fit, simulate and benchmark"};
  app.require_subcommand(1);

  FitOptions fit;
  auto* fit_cmd = app.add_subcommand("fit", "Estimate a central-subspace basis from a CSV file");
  fit_cmd->add_option("input", fit.input, "CSV file with a header row")->required();
  fit_cmd->add_option("--response-cols", fit.response_cols, "Comma-separated response column names")
      ->delimiter(',');
  fit_cmd->add_option("--method", fit.method, "Estimator")->check(CLI::IsMember(kMethods))->capture_default_str();
  fit_cmd->add_option("--family", fit.family, "Response transformation family")
      ->check(CLI::IsMember(kFamilies))
      ->capture_default_str();
  fit_cmd->add_option("--m", fit.m, "Ensemble size")->capture_default_str();
  fit_cmd->add_option("--dim", fit.dim, "Structural dimension, or 'auto' for cross validation")
      ->capture_default_str();
  fit_cmd->add_option("--d-max", fit.d_max, "Largest dimension tried by --dim auto (default min(p, 6))");
  fit_cmd->add_option("--haar-level", fit.haar_level, "Finest Haar level for --family haar")->capture_default_str();
  fit_cmd->add_option("--seed", fit.seed, "Root seed")->capture_default_str();
  fit_cmd->add_option("-o,--output", fit.output, "JSON report path (default stdout)");
  fit.tuning.attach(*fit_cmd);

  BenchOptions bench;
  auto* bench_cmd = app.add_subcommand("bench", "Run a simulation experiment with replicates");
  bench_cmd->add_option("experiment", bench.experiment, "Experiment name")
      ->required()
      ->check(CLI::IsMember(experiment_names()));
  bench_cmd->add_option("--model", bench.models, "Model name(s) (ex1..ex8, modelA..modelG or A..G)");
  bench_cmd->add_option("--n", bench.n, "Sample size(s)");
  bench_cmd->add_option("--p", bench.p, "Predictor dimension(s)");
  bench_cmd->add_option("--m", bench.m, "Ensemble size(s)");
  bench_cmd->add_option("--method", bench.method, "Restrict to one estimator")->check(CLI::IsMember(kMethods));
  bench_cmd->add_option("--family", bench.family, "Restrict to one family")->check(CLI::IsMember(kFamilies));
  bench_cmd->add_option("--replicates", bench.replicates, "Replicates per setting")->capture_default_str();
  bench_cmd->add_option("--seed", bench.seed, "Root seed")->capture_default_str();
  bench_cmd->add_option("--out-dir", bench.out_dir, "Directory for CSV and JSON results")->capture_default_str();
  bench.tuning.attach(*bench_cmd);

  GenerateOptions gen;
  auto* gen_cmd = app.add_subcommand("generate", "Export a simulated dataset as CSV");
  gen_cmd->add_option("--model", gen.model, "Model name")->required();
  gen_cmd->add_option("--n", gen.n, "Sample size (default: the model's)");
  gen_cmd->add_option("--p", gen.p, "Predictor dimension (default: the model's)");
  gen_cmd->add_option("--seed", gen.seed, "Seed")->capture_default_str();
  gen_cmd->add_option("-o,--output", gen.output, "CSV path (default stdout)");
  gen_cmd->add_option("--basis-output", gen.basis_output, "Also write the true basis to this CSV path");

  auto* models_cmd = app.add_subcommand("models", "List the simulation models");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? exit_ok : exit_usage;
  }

  try {
    if (*fit_cmd) return run_fit(fit, out);
    if (*bench_cmd) return run_bench(bench, out);
    if (*gen_cmd) return run_generate(gen, out);
    if (*models_cmd) return run_models(out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_usage;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return exit_usage;
  }
  return exit_usage;
}

}  // namespace esdr::cli
