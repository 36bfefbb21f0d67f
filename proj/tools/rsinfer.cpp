// Command-line front end: run inference on CSV data, reproduce the Monte
// Carlo coverage tables and curves, and emit local-dependence coefficient
// tables. Exit codes: 0 ok, 2 input error, 3 numerical degeneracy.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "rsinfer/experiment.hpp"
#include "rsinfer/mean_test.hpp"
#include "rsinfer/matrix.hpp"
#include "rsinfer/normal.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitDegenerate = 3;

std::ofstream open_out(const std::string &path) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot write output file: " + path);
  return out;
}

std::vector<double> parse_csv_doubles(const std::string &text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(std::stod(item));
  return out;
}

std::vector<int> parse_csv_ints(const std::string &text) {
  std::vector<int> out;
  for (double v : parse_csv_doubles(text)) out.push_back(static_cast<int>(v));
  return out;
}

struct TestArgs {
  std::string data_file;
  bool header = false;
  std::string mu;
  std::string mu_grid;  // lo,hi,points (univariate)
  int R = 0, b = 0, L = 1000, S = 1000;
  double alpha = 0.05, beta = 0.005;
  std::uint64_t seed = 1;
  std::string method = "permutation";
  std::string out;
};

int run_test(const TestArgs &args) {
  std::ifstream in(args.data_file);
  if (!in) throw std::invalid_argument("cannot open data file: " + args.data_file);
  const rsinfer::Sample data = rsinfer::read_matrix_csv(in, args.header);

  rsinfer::InferenceConfig cfg;
  cfg.R = args.R;
  cfg.b_n = args.b;
  cfg.L = args.L;
  cfg.S = args.S;
  cfg.alpha = args.alpha;
  cfg.beta = args.beta;
  cfg.seed = args.seed;
  cfg.critical_value = (args.method == "normal")
                           ? rsinfer::CriticalValueMethod::AsymptoticNormal
                           : rsinfer::CriticalValueMethod::Permutation;

  const rsinfer::StreamScope scope{cfg.seed, 0};
  const rsinfer::MeanInference engine(data, cfg, scope);

  std::vector<std::vector<double>> grid;
  if (!args.mu.empty()) {
    grid.push_back(parse_csv_doubles(args.mu));
    if (static_cast<int>(grid[0].size()) != data.cols())
      throw std::invalid_argument("--mu must have one value per data column");
  } else if (!args.mu_grid.empty()) {
    const auto parts = parse_csv_doubles(args.mu_grid);
    if (parts.size() != 3 || data.cols() != 1)
      throw std::invalid_argument("--mu-grid needs lo,hi,points on univariate data");
    const int points = static_cast<int>(parts[2]);
    if (points < 1) throw std::invalid_argument("--mu-grid: points must be positive");
    for (int k = 0; k < points; ++k) {
      const double frac = (points == 1) ? 0.0 : static_cast<double>(k) / (points - 1);
      grid.push_back({parts[0] + frac * (parts[1] - parts[0])});
    }
  } else {
    if (data.cols() != 1)
      throw std::invalid_argument("multivariate data needs an explicit --mu");
    grid = engine.default_grid();
  }

  const rsinfer::ConfidenceFunctionCurve curve = engine.confidence_set(grid);
  const double c_alpha = engine.critical_value(cfg.alpha);

  // the reported statistic uses one dedicated bundle, shared by all grid points
  rsinfer::RngStream test_rng = scope.stream(rsinfer::stream_purpose::kTestBundle);
  std::vector<double> stats;
  engine.build_bundle_stats(test_rng, stats);

  std::ostringstream body;
  for (int j = 0; j < data.cols(); ++j) body << "mu" << j << ",";
  body << "t_n,critical_value,reject,q,member\n";
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double t = engine.t_from_stats(stats, grid[k]);
    char num[64];
    for (double v : grid[k]) {
      std::snprintf(num, sizeof(num), "%.10g", v);
      body << num << ",";
    }
    std::snprintf(num, sizeof(num), "%.10g", t);
    body << num << ",";
    std::snprintf(num, sizeof(num), "%.10g", c_alpha);
    body << num << "," << (t > c_alpha ? 1 : 0) << ","
         << rsinfer::format_probability(curve.values[k]) << "," << (curve.members[k] ? 1 : 0)
         << "\n";
  }
  if (args.out.empty()) {
    std::cout << body.str();
  } else {
    open_out(args.out) << body.str();
  }
  return kExitOk;
}

rsinfer::RunOptions make_run_options(int threads, const std::string &mode,
                                     const std::string &graph_file,
                                     const std::string &dump_samples) {
  rsinfer::RunOptions options;
  options.threads = threads;
  options.mode = (mode == "set") ? rsinfer::CoverageMode::Set : rsinfer::CoverageMode::Test;
  options.graph_file = graph_file;
  options.dump_samples = dump_samples;
  return options;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"randomized-subsampling inference for locally dependent data"};
  app.require_subcommand(1);

  TestArgs test_args;
  auto *test = app.add_subcommand("test", "test a hypothesized mean on CSV data");
  test->add_option("data", test_args.data_file, "numeric CSV matrix")->required();
  test->add_flag("--header", test_args.header, "first CSV row is a header");
  test->add_option("--mu", test_args.mu, "hypothesized mean, comma separated");
  test->add_option("--mu-grid", test_args.mu_grid, "univariate grid lo,hi,points");
  test->add_option("--R", test_args.R, "permutations per statistic (default n)");
  test->add_option("--b", test_args.b, "subsample size (default n^(1/3))");
  test->add_option("--L", test_args.L, "draws behind the permutation critical value");
  test->add_option("--S", test_args.S, "draws behind the confidence function");
  test->add_option("--alpha", test_args.alpha, "nominal level");
  test->add_option("--beta", test_args.beta, "conservativeness margin");
  test->add_option("--seed", test_args.seed, "master seed");
  test->add_option("--method", test_args.method, "normal|permutation");
  test->add_option("--out", test_args.out, "output CSV path (default stdout)");

  std::string spec_file, out_file, coverage_mode = "test", graph_file, dump_samples;
  std::string levels_override, mu_grid_override;
  int threads = 0, mc_reps_override = -1;
  std::int64_t seed_override = -1;
  bool with_timing = false;

  auto add_run_flags = [&](CLI::App *cmd) {
    cmd->add_option("--spec", spec_file, "experiment spec file (key=value)")->required();
    cmd->add_option("--out", out_file, "output CSV path (default stdout)");
    cmd->add_option("--threads", threads, "worker threads (0 = default)");
    cmd->add_option("--seed", seed_override, "override the spec seed");
    cmd->add_option("--mc-reps", mc_reps_override, "override replication count");
    cmd->add_option("--levels", levels_override, "override levels, e.g. 0.99,0.95,0.90");
    cmd->add_option("--coverage-mode", coverage_mode,
                    "set = membership of mu0 in the confidence set, "
                    "test = coverage rate of the randomized interval");
    cmd->add_option("--graph-file", graph_file,
                    "design graph file: loaded if present, written otherwise");
    cmd->add_option("--dump-samples", dump_samples, "dump the first replication's sample");
    cmd->add_flag("--timing", with_timing, "append a wall_time_s column");
  };

  auto *simulate = app.add_subcommand("simulate", "coverage of mu0 = 0 per level and method");
  add_run_flags(simulate);
  auto *curve = app.add_subcommand("coverage-curve", "coverage across a grid of means");
  add_run_flags(curve);
  curve->add_option("--mu-grid", mu_grid_override, "override grid, comma separated values");

  std::string k_list = "2", n_list, lambda_mode = "mc";
  long lambda_draws = 100000;
  auto *lambda = app.add_subcommand("lambda", "local-dependence coefficient table");
  lambda->add_option("--spec", spec_file, "design spec file")->required();
  lambda->add_option("--k", k_list, "coefficient orders, comma separated");
  lambda->add_option("--n-grid", n_list, "design sizes (default: the spec's n)");
  lambda->add_option("--mode", lambda_mode, "exact|mc");
  lambda->add_option("--draws", lambda_draws, "Monte Carlo draws per size");
  lambda->add_option("--out", out_file, "output CSV path (default stdout)");
  lambda->add_option("--seed", seed_override, "override the spec seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    return app.exit(e) == 0 ? kExitOk : kExitInput;
  }

  try {
#ifdef _OPENMP
    if (threads > 0) omp_set_num_threads(threads);
#endif
    if (test->parsed()) return run_test(test_args);

    rsinfer::ExperimentSpec spec = rsinfer::ExperimentSpec::load(spec_file);
    if (seed_override >= 0) spec.cfg.seed = static_cast<std::uint64_t>(seed_override);
    if (mc_reps_override > 0) spec.mc_reps = mc_reps_override;
    if (!levels_override.empty()) spec.levels = parse_csv_doubles(levels_override);
    spec.validate();

    if (lambda->parsed()) {
      std::vector<int> sizes =
          n_list.empty() ? std::vector<int>{spec.n} : parse_csv_ints(n_list);
      const std::vector<int> ks = parse_csv_ints(k_list);
      for (int k : ks)
        if (k < 1 || k > 8)
          throw std::invalid_argument("lambda: k must be in [1, 8]");
      const auto mode = (lambda_mode == "exact")
                            ? rsinfer::LambdaMethod::ExactEnumeration
                            : rsinfer::LambdaMethod::MonteCarloPermutations;
      const auto rows = rsinfer::run_lambda(spec, sizes, ks, mode, lambda_draws);
      if (out_file.empty()) {
        rsinfer::write_lambda_csv(std::cout, rows);
      } else {
        auto out = open_out(out_file);
        rsinfer::write_lambda_csv(out, rows);
      }
      return kExitOk;
    }

    const rsinfer::RunOptions options =
        make_run_options(threads, coverage_mode, graph_file, dump_samples);
    std::vector<rsinfer::CoverageRow> rows;
    bool with_mu = false;
    if (simulate->parsed()) {
      rows = rsinfer::run_simulate(spec, options);
    } else {
      if (!mu_grid_override.empty()) spec.mu_grid = parse_csv_doubles(mu_grid_override);
      rows = rsinfer::run_coverage_curve(spec, options);
      with_mu = true;
    }
    if (out_file.empty()) {
      rsinfer::write_coverage_csv(std::cout, rows, with_mu, with_timing);
    } else {
      auto out = open_out(out_file);
      rsinfer::write_coverage_csv(out, rows, with_mu, with_timing);
    }
    return kExitOk;
  } catch (const rsinfer::NotPositiveDefinite &e) {
    std::cerr << "error: degenerate covariance: " << e.what() << "\n";
    return kExitDegenerate;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
}
