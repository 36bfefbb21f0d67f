// Acceptance suite: one pass/fail line per criterion, nonzero exit when any
// criterion fails. Usage: acceptance <path-to-rsinfer-binary> <specs-dir>
//
// Note on criterion 2: it pins the idealized standard-normal approximation of
// the statistic at n = 500. The measured sampling distribution sits at mean
// about -sqrt(R) b/n and variance about 2(b-1)/b, which the permutation
// calibration absorbs but the normal approximation does not (the same gap is
// visible in the normal-method coverage rows of the study tables). The
// criterion is asserted as stated and is expected to stay red; the measured
// values are printed alongside.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "rsinfer/dgp.hpp"
#include "rsinfer/experiment.hpp"
#include "rsinfer/local_dependence.hpp"
#include "rsinfer/mean_test.hpp"
#include "rsinfer/moment_test.hpp"
#include "rsinfer/normal.hpp"
#include "rsinfer/reference.hpp"

using namespace rsinfer;

namespace {

std::string g_binary, g_specs;
int g_failures = 0;

void report(int index, const std::string &name, bool pass, const std::string &detail) {
  std::printf("%s  acceptance %2d: %s (%s)\n", pass ? "PASS" : "FAIL", index, name.c_str(),
              detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

Sample gaussian_sample(int n, std::uint64_t seed, std::uint64_t rep) {
  const StreamScope scope{seed, rep};
  RngStream rng = scope.stream(stream_purpose::kSample);
  return iid_normal(n, rng);
}

double coverage_cell(const std::vector<CoverageRow> &rows, const std::string &method,
                     double level) {
  for (const auto &row : rows)
    if (row.method == method && std::fabs(row.level - level) < 1e-12) return row.coverage;
  throw std::runtime_error("missing coverage cell");
}

// ---------------------------------------------------------------------------

void criterion_1_enumeration_identity() {
  const auto t0 = std::chrono::steady_clock::now();
  const Sample x(6, 2, {1, 7, 2, 4, 3, 1, 5, 2, 9, 6, 4, 8});
  const SymmetricMatrix sinv = invert_spd(sample_covariance(x));
  const std::vector<double> mu = {0.5, -0.25};

  std::vector<PermutationPrefix> prefixes;
  PermutationPrefix current;
  std::vector<bool> used(6, false);
  std::function<void()> recurse = [&]() {
    if (current.size() == 3) {
      prefixes.push_back(current);
      return;
    }
    for (int v = 0; v < 6; ++v) {
      if (used[v]) continue;
      used[v] = true;
      current.push_back(v);
      recurse();
      current.pop_back();
      used[v] = false;
    }
  };
  recurse();

  double avg = 0.0;
  for (const auto &prefix : prefixes)
    avg += reference::u_statistic_direct(x, mu, sinv, prefix);
  avg /= static_cast<double>(prefixes.size());

  double zeta = 0.0;
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) {
      if (i == j) continue;
      for (int a = 0; a < 2; ++a)
        for (int c = 0; c < 2; ++c)
          zeta += (x(i, a) - mu[a]) * sinv(a, c) * (x(j, c) - mu[c]);
    }
  const double expected = (3 - 1) * zeta / (2.0 * 6.0 * 5.0);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  char detail[160];
  std::snprintf(detail, sizeof(detail),
                "%zu prefixes, |avg-expected|=%.2e, %.3fs", prefixes.size(),
                std::fabs(avg - expected), seconds);
  report(1, "prefix-average identity over all 120 ordered prefixes",
         prefixes.size() == 120 && std::fabs(avg - expected) < 1e-10 && seconds < 1.0,
         detail);
}

void criterion_2_normal_approximation() {
  const int n = 500, R = 500, b = 7, reps = 2000;
  InferenceConfig cfg;
  cfg.R = R;
  cfg.b_n = b;
  cfg.L = 2;
  cfg.S = 2;
  std::vector<double> ts(reps);
#pragma omp parallel for schedule(dynamic)
  for (int rep = 0; rep < reps; ++rep) {
    const Sample x = gaussian_sample(n, 909090, static_cast<std::uint64_t>(rep));
    const StreamScope scope{909090, static_cast<std::uint64_t>(rep)};
    const MeanInference engine(x, cfg, scope);
    RngStream rng = scope.stream(stream_purpose::kTestBundle);
    std::vector<double> stats;
    engine.build_bundle_stats(rng, stats);
    const double mu[1] = {0.0};
    ts[rep] = engine.t_from_stats(stats, mu);
  }
  double sum = 0, sum_sq = 0;
  for (double t : ts) {
    sum += t;
    sum_sq += t * t;
  }
  const double mean = sum / reps;
  const double var = sum_sq / reps - mean * mean;
  std::sort(ts.begin(), ts.end());
  double ks_plus = 0.0;
  for (int i = 0; i < reps; ++i)
    ks_plus = std::max(ks_plus, (i + 1.0) / reps - normal_cdf(ts[i]));

  char detail[200];
  std::snprintf(detail, sizeof(detail),
                "mean=%.4f (need |.|<0.1), var=%.4f (need |.-1|<0.15), ks+=%.4f (need <0.05)",
                mean, var, ks_plus);
  report(2, "normal approximation of the statistic at n=500",
         std::fabs(mean) < 0.1 && std::fabs(var - 1.0) < 0.15 && ks_plus < 0.05, detail);
}

void criterion_3_iid_table() {
  const ExperimentSpec spec = ExperimentSpec::load(g_specs + "/table1_n500_accept.spec");
  RunOptions options;
  options.mode = CoverageMode::Test;
  const auto rows = run_simulate(spec, options);
  const double perm = coverage_cell(rows, "permutation", 0.95);
  const double norm = coverage_cell(rows, "normal", 0.95);
  char detail[160];
  std::snprintf(detail, sizeof(detail),
                "perm=%.4f (0.9487 +- 0.03), normal=%.4f (0.9237 +- 0.03), reps=%d", perm,
                norm, spec.mc_reps);
  report(3, "independent-design coverage table, n=500",
         std::fabs(perm - 0.9487) < 0.03 && std::fabs(norm - 0.9237) < 0.03, detail);
}

void criterion_4_dependency_graph_table() {
  const ExperimentSpec spec = ExperimentSpec::load(g_specs + "/table2_er_l3_c06_n1000_desk.spec");
  RunOptions options;
  options.mode = CoverageMode::Test;
  const auto rows = run_simulate(spec, options);
  const double perm = coverage_cell(rows, "permutation", 0.95);
  char detail[120];
  std::snprintf(detail, sizeof(detail), "perm=%.4f (0.9485 +- 0.045), reps=%d", perm,
                spec.mc_reps);
  report(4, "dependency-graph coverage spot check, n=1000", std::fabs(perm - 0.9485) < 0.045,
         detail);
}

void criterion_5_network_table() {
  const ExperimentSpec spec = ExperimentSpec::load(g_specs + "/table3_l2_r10_n500_desk.spec");
  RunOptions options;
  options.mode = CoverageMode::Test;
  const auto rows = run_simulate(spec, options);
  const double perm = coverage_cell(rows, "permutation", 0.95);
  char detail[140];
  std::snprintf(detail, sizeof(detail), "perm=%.4f (<0.90 and 0.8447 +- 0.05), reps=%d", perm,
                spec.mc_reps);
  report(5, "network-dependence undercoverage, n=500",
         perm < 0.90 && std::fabs(perm - 0.8447) < 0.05, detail);
}

void criterion_6_local_power() {
  const int n = 1000, reps = 1000;
  InferenceConfig cfg;
  cfg.R = n;
  cfg.b_n = 10;
  cfg.L = 2;
  cfg.S = 2;
  const double mu_local =
      1.0 / (std::pow(static_cast<double>(cfg.R), 0.25) * std::sqrt(10.0));
  const double z95 = normal_quantile(0.95);
  std::vector<int> rejections(reps, 0);
#pragma omp parallel for schedule(dynamic)
  for (int rep = 0; rep < reps; ++rep) {
    const Sample x = gaussian_sample(n, 171717, static_cast<std::uint64_t>(rep));
    const StreamScope scope{171717, static_cast<std::uint64_t>(rep)};
    const MeanInference engine(x, cfg, scope);
    RngStream rng = scope.stream(stream_purpose::kTestBundle);
    std::vector<double> stats;
    engine.build_bundle_stats(rng, stats);
    const double mu[1] = {mu_local};
    rejections[rep] = engine.t_from_stats(stats, mu) > z95 ? 1 : 0;
  }
  int total = 0;
  for (int r : rejections) total += r;
  const double rate = static_cast<double>(total) / reps;
  const double target = 1.0 - normal_cdf(z95 - 1.0);
  char detail[140];
  std::snprintf(detail, sizeof(detail), "rejection=%.4f, drift target=%.4f (+- 0.04)", rate,
                target);
  report(6, "local power against a drifting alternative", std::fabs(rate - target) < 0.04,
         detail);
}

void criterion_7_rate_bound() {
  std::vector<double> scaled;
  for (int n : {50, 100, 200, 400}) {
    SymmetricMatrix cov = SymmetricMatrix::identity(n);
    for (int i = 0; i < n; ++i) cov.set(i, (i + 1) % n, 0.3);  // cycle, degree 2
    const LambdaReport report_k2 =
        lambda_k(cov, 2, LambdaMethod::MonteCarloPermutations, 232323, 100000);
    scaled.push_back(n * report_k2.lambda_value);
  }
  bool ok = true;
  std::ostringstream detail;
  detail.precision(3);
  detail << "n*lambda(2) =";
  for (double s : scaled) detail << " " << s;
  for (std::size_t i = 1; i < scaled.size(); ++i) {
    const double ratio = scaled[i] / scaled[i - 1];
    if (!(ratio > 0.4 && ratio < 2.5)) ok = false;
  }
  report(7, "bounded-degree dependence rate stays of order 1/n", ok, detail.str());
}

void criterion_8_mean_case_reduction() {
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 40 + 3 * trial;
    const Sample x = gaussian_sample(n, 333000 + trial, 0);
    InferenceConfig cfg;
    cfg.L = 50;
    cfg.S = 50;
    cfg = cfg.bound_to(n);
    const StreamScope scope{444000 + static_cast<std::uint64_t>(trial), 7};
    const MomentModel model = mean_model(1);
    const double theta[1] = {0.21 * (trial - 10)};

    RngStream bundle_rng = scope.stream(stream_purpose::kTestBundle);
    const PermutationBundle bundle = draw_bundle(bundle_rng, n, cfg.b_n, cfg.R);
    worst = std::max(worst, std::fabs(t_statistic_theta(x, model, theta, bundle) -
                                      t_statistic(x, theta, bundle)));
    worst = std::max(worst, std::fabs(critical_value_theta(x, model, theta, cfg, scope) -
                                      permutation_critical_value(x, cfg, scope)));
    const double q_theta = confidence_function_theta(x, model, theta, cfg, scope);
    const Sample g = moment_matrix(x, model, theta);
    const std::vector<double> zero = {0.0};
    const double q_mean = MeanInference(g, cfg, scope).confidence_function(zero, cfg.alpha);
    worst = std::max(worst, std::fabs(q_theta - q_mean));
  }
  char detail[100];
  std::snprintf(detail, sizeof(detail), "worst |moment - mean| = %.2e over 20 datasets",
                worst);
  report(8, "moment machinery reduces exactly to the mean test", worst < 1e-12, detail);
}

void criterion_9_thread_determinism() {
  const std::string spec = g_specs + "/determinism.spec";
  const std::string out1 = "/tmp/rsinfer_det_t1.csv";
  const std::string out4 = "/tmp/rsinfer_det_t4.csv";
  const std::string cmd1 = g_binary + " simulate --spec " + spec + " --threads 1 --out " +
                           out1 + " 2>/dev/null";
  const std::string cmd4 = g_binary + " simulate --spec " + spec + " --threads 4 --out " +
                           out4 + " 2>/dev/null";
  const int rc1 = std::system(cmd1.c_str());
  const int rc4 = std::system(cmd4.c_str());
  auto slurp = [](const std::string &path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  const std::string a = slurp(out1), b = slurp(out4);
  char detail[120];
  std::snprintf(detail, sizeof(detail), "bytes=%zu, identical=%s", a.size(),
                (a == b && !a.empty()) ? "yes" : "no");
  report(9, "simulation output byte-identical across thread counts",
         rc1 == 0 && rc4 == 0 && !a.empty() && a == b, detail);
}

void criterion_10_property_battery() {
  bool ok = true;
  std::ostringstream notes;

  // graph invariants after both generators
  {
    RngStream rng(10101, 0);
    const Graph er = erdos_renyi(300, 3.0, rng);
    const Graph ba = barabasi_albert(300, 2, rng);
    for (const Graph *g : {&er, &ba}) {
      for (int i = 0; i < g->node_count() && ok; ++i) {
        const auto &adj = g->neighbors(i);
        if (!std::is_sorted(adj.begin(), adj.end())) ok = false;
        for (int j : adj)
          if (j == i || !g->has_edge(j, i)) ok = false;
      }
    }
    if (!ok) notes << "graph invariants failed; ";
  }

  // mixing marginals stay unit variance
  {
    Graph g(5);
    g.add_edge(0, 1);
    g.add_edge(1, 2);
    g.add_edge(3, 4);
    std::vector<double> sum(5, 0), sum_sq(5, 0);
    const int reps = 30000;
    for (int rep = 0; rep < reps; ++rep) {
      RngStream rng(20202, make_stream_id(rep, 0, stream_purpose::kSample));
      const Sample y = dependency_graph_mix(g, MixingParams{0.6}, rng);
      for (int i = 0; i < 5; ++i) {
        sum[i] += y(i, 0);
        sum_sq[i] += y(i, 0) * y(i, 0);
      }
    }
    for (int i = 0; i < 5; ++i) {
      const double mean = sum[i] / reps;
      if (std::fabs(sum_sq[i] / reps - mean * mean - 1.0) > 0.04) {
        ok = false;
        notes << "mixing variance off at node " << i << "; ";
      }
    }
  }

  // relabeling invariance of the enumerated statistic values
  {
    const Sample x(5, 1, {1.5, -2, 4, 0.5, 3});
    const std::vector<int> relabel = {2, 4, 0, 3, 1};
    std::vector<double> shuffled(5);
    for (int i = 0; i < 5; ++i) shuffled[relabel[i]] = x(i, 0);
    const Sample y(5, 1, std::move(shuffled));
    const SymmetricMatrix sx = invert_spd(sample_covariance(x));
    const SymmetricMatrix sy = invert_spd(sample_covariance(y));
    const double mu[1] = {0.3};
    std::vector<double> ux, uy;
    PermutationPrefix prefix(2);
    for (int a = 0; a < 5; ++a)
      for (int b = 0; b < 5; ++b) {
        if (a == b) continue;
        prefix = {a, b};
        ux.push_back(u_statistic(x, mu, sx, prefix));
        uy.push_back(u_statistic(y, mu, sy, prefix));
      }
    std::sort(ux.begin(), ux.end());
    std::sort(uy.begin(), uy.end());
    for (std::size_t i = 0; i < ux.size(); ++i)
      if (std::fabs(ux[i] - uy[i]) > 1e-12) ok = false;
    if (!ok) notes << "relabeling invariance failed; ";
  }

  // location-scale invariance
  {
    const Sample x = gaussian_sample(30, 50505, 0);
    std::vector<double> scaled(30);
    for (int i = 0; i < 30; ++i) scaled[i] = -1.4 * x(i, 0) + 0.8;
    const Sample y(30, 1, std::move(scaled));
    RngStream rng(60606, 0);
    const PermutationBundle bundle = draw_bundle(rng, 30, 4, 10);
    const double mu_x[1] = {0.1};
    const double mu_y[1] = {-1.4 * 0.1 + 0.8};
    if (std::fabs(t_statistic(x, mu_x, bundle) - t_statistic(y, mu_y, bundle)) > 1e-12) {
      ok = false;
      notes << "location-scale invariance failed; ";
    }
  }

  // ordering-free coefficient under relabeling
  {
    SymmetricMatrix cov = SymmetricMatrix::identity(7);
    for (int i = 0; i + 1 < 7; ++i) cov.set(i, i + 1, std::exp(-0.9 * 1.0));
    const std::vector<int> perm = {5, 2, 0, 6, 1, 4, 3};
    SymmetricMatrix relabeled(7);
    for (int i = 0; i < 7; ++i)
      for (int j = 0; j <= i; ++j) relabeled.set(perm[i], perm[j], cov(i, j));
    for (int k = 2; k <= 3; ++k) {
      const double a = lambda_k(cov, k, LambdaMethod::ExactEnumeration).lambda_value;
      const double b = lambda_k(relabeled, k, LambdaMethod::ExactEnumeration).lambda_value;
      if (std::fabs(a - b) > 1e-13) {
        ok = false;
        notes << "coefficient relabeling invariance failed; ";
      }
    }
  }

  report(10, "property battery (graphs, marginals, invariances)", ok,
         ok ? "all properties hold" : notes.str());
}

}  // namespace

int main(int argc, char **argv) {
  if (argc < 3) {
    std::fprintf(stderr, "usage: acceptance <rsinfer-binary> <specs-dir>\n");
    return 2;
  }
  g_binary = argv[1];
  g_specs = argv[2];
  try {
    criterion_1_enumeration_identity();
    criterion_2_normal_approximation();
    criterion_3_iid_table();
    criterion_4_dependency_graph_table();
    criterion_5_network_table();
    criterion_6_local_power();
    criterion_7_rate_bound();
    criterion_8_mean_case_reduction();
    criterion_9_thread_determinism();
    criterion_10_property_battery();
  } catch (const std::exception &e) {
    std::fprintf(stderr, "acceptance suite aborted: %s\n", e.what());
    return 99;
  }
  std::printf("%d of 10 criteria failed\n", g_failures);
  return g_failures;
}
