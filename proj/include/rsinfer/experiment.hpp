#pragma once

// Monte Carlo experiment harness: parses flat key=value experiment specs,
// runs the coverage simulations behind the study tables and curves, and the
// local-dependence rate tables. Replications run in parallel; every stream is
// derived from (seed, replication index, purpose), so output is byte-identical
// for any worker-thread count.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rsinfer/local_dependence.hpp"
#include "rsinfer/sample.hpp"

namespace rsinfer {

enum class Design { IID, DepGraphER, DepGraphBA, NetworkER };

std::string design_name(Design d);
Design parse_design(const std::string &name);

struct ExperimentSpec {
  Design design = Design::IID;
  int n = 500;
  double lambda_graph = 0.0;  // ER edge intensity (DepGraphER, NetworkER)
  int m_attach = 0;           // BA attachment count (DepGraphBA)
  double mix_c = 0.0;         // mixing strength (DepGraph designs)
  double rho = 0.0;           // correlation decay (NetworkER)
  InferenceConfig cfg;        // cfg.R == 0 / cfg.b_n == 0 resolve to defaults at run time
  int mc_reps = 1000;
  std::vector<double> levels = {0.99, 0.95, 0.90};
  std::vector<double> mu_grid;  // coverage-curve evaluation points

  void validate() const;

  // flat key=value text, one pair per line, '#' comments
  static ExperimentSpec parse(std::istream &is);
  static ExperimentSpec load(const std::string &path);
  void serialize(std::ostream &os) const;
};

// How a replication contributes to a coverage cell:
//   Set   1{q(mu0; alpha-beta) >= 1-alpha}   (membership of mu0 in the set)
//   Test  q(mu0; alpha-beta) itself          (coverage rate of the randomized
//                                             interval; reproduces the study tables)
enum class CoverageMode { Set, Test };

struct RunOptions {
  int threads = 0;  // 0 = library default
  CoverageMode mode = CoverageMode::Test;
  std::string graph_file;    // load design graph if present, else save the generated one
  std::string dump_samples;  // write the first replication's sample here
};

struct CoverageRow {
  std::string design;
  int n = 0;
  double lambda_graph = 0.0;
  int m_attach = 0;
  double mix_c = 0.0;
  double rho = 0.0;
  double mu = 0.0;
  double level = 0.0;
  std::string method;  // "normal" or "permutation"
  double coverage = 0.0;
  double mc_se = 0.0;
  double wall_time_s = 0.0;
};

// Coverage of mu0 = 0 for each level x method.
std::vector<CoverageRow> run_simulate(const ExperimentSpec &spec, const RunOptions &options);

// Coverage at every point of spec.mu_grid (univariate designs only). The
// mu = 0 cell matches run_simulate bit for bit under the same seed.
std::vector<CoverageRow> run_coverage_curve(const ExperimentSpec &spec,
                                            const RunOptions &options);

struct LambdaRow {
  int n = 0;
  int k = 0;
  double lambda = 0.0;
  double bound = 0.0;
  std::string method;
  double mc_se = 0.0;
};

// Coefficient table for the spec's design covariance over a grid of sizes.
// The design covariance is identity for IID, the repaired network matrix for
// NetworkER, and unit diagonal with mix_c^2 on graph edges for the dependency
// graph designs (the single-edge correlation of the mixing construction).
std::vector<LambdaRow> run_lambda(const ExperimentSpec &spec, std::span<const int> sizes,
                                  std::span<const int> ks, LambdaMethod method,
                                  long num_draws);

// Timing is opt-in so the default output stays byte-identical across worker
// thread counts.
void write_coverage_csv(std::ostream &os, std::span<const CoverageRow> rows, bool with_mu,
                        bool with_timing = false);
void write_lambda_csv(std::ostream &os, std::span<const LambdaRow> rows);

// 6 significant digits, plain decimal notation; used for all probability
// columns so output is stable across platforms.
std::string format_probability(double p);

// Numeric CSV matrix (comma separated, '.' decimal point). When has_header is
// set the first line is skipped. Parse errors name the 1-based line number.
Sample read_matrix_csv(std::istream &is, bool has_header);

}  // namespace rsinfer
