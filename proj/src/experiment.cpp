#include "rsinfer/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "rsinfer/dgp.hpp"
#include "rsinfer/mean_test.hpp"
#include "rsinfer/normal.hpp"

namespace rsinfer {

std::string design_name(Design d) {
  switch (d) {
    case Design::IID: return "IID";
    case Design::DepGraphER: return "DepGraphER";
    case Design::DepGraphBA: return "DepGraphBA";
    case Design::NetworkER: return "NetworkER";
  }
  return "?";
}

Design parse_design(const std::string &name) {
  if (name == "IID") return Design::IID;
  if (name == "DepGraphER") return Design::DepGraphER;
  if (name == "DepGraphBA") return Design::DepGraphBA;
  if (name == "NetworkER") return Design::NetworkER;
  throw std::invalid_argument("unknown design: " + name);
}

void ExperimentSpec::validate() const {
  if (n < 2) throw std::invalid_argument("spec: n must be >= 2");
  if (mc_reps < 1) throw std::invalid_argument("spec: mc_reps must be positive");
  if (levels.empty()) throw std::invalid_argument("spec: need at least one level");
  for (double lv : levels)
    if (!(lv > 0.0 && lv < 1.0))
      throw std::invalid_argument("spec: levels must be in (0,1)");
  const bool er = design == Design::DepGraphER || design == Design::NetworkER;
  const bool dep = design == Design::DepGraphER || design == Design::DepGraphBA;
  if (er && !(lambda_graph >= 0.0))
    throw std::invalid_argument("spec: lambda_graph required for ER-based designs");
  if (design == Design::DepGraphBA && (m_attach < 1 || m_attach > 20))
    throw std::invalid_argument("spec: m_attach must be in [1,20] for DepGraphBA");
  if (dep && !(mix_c >= 0.0 && mix_c <= 1.0))
    throw std::invalid_argument("spec: mix_c must be in [0,1] for dependency-graph designs");
  if (design == Design::NetworkER && !(rho > 0.0))
    throw std::invalid_argument("spec: rho must be positive for NetworkER");
  if (design != Design::NetworkER && rho != 0.0)
    throw std::invalid_argument("spec: rho applies only to NetworkER");
  if (design != Design::DepGraphBA && m_attach != 0)
    throw std::invalid_argument("spec: m_attach applies only to DepGraphBA");
  if (design == Design::IID && (lambda_graph != 0.0 || mix_c != 0.0))
    throw std::invalid_argument("spec: graph parameters do not apply to IID");
  if (design == Design::DepGraphBA && lambda_graph != 0.0)
    throw std::invalid_argument("spec: lambda_graph does not apply to DepGraphBA");
}

namespace {

std::vector<double> parse_double_list(const std::string &text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(std::stod(item));
  return out;
}

std::string join_double_list(std::span<const double> values) {
  std::ostringstream os;
  os.precision(17);
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) os << ",";
    os << values[i];
  }
  return os.str();
}

}  // namespace

ExperimentSpec ExperimentSpec::parse(std::istream &is) {
  ExperimentSpec spec;
  spec.levels.clear();
  std::map<std::string, std::string> kv;
  std::string line;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    while (!line.empty() && (line.back() == ' ' || line.back() == '\r' || line.back() == '\t'))
      line.pop_back();
    std::size_t start = line.find_first_not_of(" \t");
    if (start == std::string::npos) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("spec line " + std::to_string(line_no) +
                                  ": expected key=value");
    std::string key = line.substr(start, eq - start);
    while (!key.empty() && (key.back() == ' ' || key.back() == '\t')) key.pop_back();
    std::string value = line.substr(eq + 1);
    const auto vstart = value.find_first_not_of(" \t");
    value = (vstart == std::string::npos) ? "" : value.substr(vstart);
    kv[key] = value;
  }

  for (const auto &[key, value] : kv) {
    if (key == "design") spec.design = parse_design(value);
    else if (key == "n") spec.n = std::stoi(value);
    else if (key == "lambda_graph") spec.lambda_graph = std::stod(value);
    else if (key == "m_attach") spec.m_attach = std::stoi(value);
    else if (key == "mix_c") spec.mix_c = std::stod(value);
    else if (key == "rho") spec.rho = std::stod(value);
    else if (key == "R") spec.cfg.R = std::stoi(value);
    else if (key == "b_n") spec.cfg.b_n = std::stoi(value);
    else if (key == "L") spec.cfg.L = std::stoi(value);
    else if (key == "S") spec.cfg.S = std::stoi(value);
    else if (key == "alpha") spec.cfg.alpha = std::stod(value);
    else if (key == "beta") spec.cfg.beta = std::stod(value);
    else if (key == "seed") spec.cfg.seed = std::stoull(value);
    else if (key == "method")
      spec.cfg.critical_value = (value == "normal") ? CriticalValueMethod::AsymptoticNormal
                                                    : CriticalValueMethod::Permutation;
    else if (key == "mc_reps") spec.mc_reps = std::stoi(value);
    else if (key == "levels") spec.levels = parse_double_list(value);
    else if (key == "mu_grid") spec.mu_grid = parse_double_list(value);
    else throw std::invalid_argument("spec: unknown key " + key);
  }
  if (spec.levels.empty()) spec.levels = {0.99, 0.95, 0.90};
  spec.validate();
  return spec;
}

ExperimentSpec ExperimentSpec::load(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("spec: cannot open " + path);
  return parse(in);
}

void ExperimentSpec::serialize(std::ostream &os) const {
  os.precision(17);
  os << "design=" << design_name(design) << "\n";
  os << "n=" << n << "\n";
  if (design == Design::DepGraphER || design == Design::NetworkER)
    os << "lambda_graph=" << lambda_graph << "\n";
  if (design == Design::DepGraphBA) os << "m_attach=" << m_attach << "\n";
  if (design == Design::DepGraphER || design == Design::DepGraphBA)
    os << "mix_c=" << mix_c << "\n";
  if (design == Design::NetworkER) os << "rho=" << rho << "\n";
  os << "R=" << cfg.R << "\n";
  os << "b_n=" << cfg.b_n << "\n";
  os << "L=" << cfg.L << "\n";
  os << "S=" << cfg.S << "\n";
  os << "alpha=" << cfg.alpha << "\n";
  os << "beta=" << cfg.beta << "\n";
  os << "seed=" << cfg.seed << "\n";
  os << "method="
     << (cfg.critical_value == CriticalValueMethod::AsymptoticNormal ? "normal" : "permutation")
     << "\n";
  os << "mc_reps=" << mc_reps << "\n";
  os << "levels=" << join_double_list(levels) << "\n";
  if (!mu_grid.empty()) os << "mu_grid=" << join_double_list(mu_grid) << "\n";
}

namespace {

// Per-design generator state shared by all replications (the graph and the
// network covariance factor are realized once per run).
struct DesignContext {
  ExperimentSpec spec;
  std::optional<Graph> graph;
  std::optional<NetworkGaussianSampler> network;

  explicit DesignContext(const ExperimentSpec &s, const RunOptions &options) : spec(s) {
    if (spec.design == Design::IID) return;
    const StreamScope graph_scope{spec.cfg.seed, 0};
    bool loaded = false;
    if (!options.graph_file.empty()) {
      std::ifstream probe(options.graph_file);
      if (probe) {
        graph = load_graph_file(options.graph_file);
        if (graph->node_count() != spec.n)
          throw std::invalid_argument("graph file node count does not match spec n");
        loaded = true;
      }
    }
    if (!loaded) {
      RngStream rng = graph_scope.stream(stream_purpose::kGraph);
      if (spec.design == Design::DepGraphBA)
        graph = barabasi_albert(spec.n, spec.m_attach, rng);
      else
        graph = erdos_renyi(spec.n, spec.lambda_graph, rng);
      if (!options.graph_file.empty()) save_graph_file(options.graph_file, *graph);
    }
    if (spec.design == Design::NetworkER) {
      const DistanceMatrix dist = all_pairs_distances(*graph);
      network.emplace(dist, NetworkCovParams{spec.rho});
    }
  }

  Sample generate(int rep) const {
    const StreamScope scope{spec.cfg.seed, static_cast<std::uint64_t>(rep)};
    RngStream rng = scope.stream(stream_purpose::kSample);
    switch (spec.design) {
      case Design::IID: return iid_normal(spec.n, rng);
      case Design::DepGraphER:
      case Design::DepGraphBA:
        return dependency_graph_mix(*graph, MixingParams{spec.mix_c}, rng);
      case Design::NetworkER: return network->draw(rng);
    }
    throw std::logic_error("unreachable design");
  }
};

void maybe_dump_sample(const RunOptions &options, const Sample &sample) {
  if (options.dump_samples.empty()) return;
  std::ofstream out(options.dump_samples);
  if (!out) throw std::invalid_argument("cannot write sample dump: " + options.dump_samples);
  out << "row";
  for (int j = 0; j < sample.cols(); ++j) out << ",x" << j;
  out << "\n";
  out.precision(17);
  for (int i = 0; i < sample.rows(); ++i) {
    out << i;
    for (int j = 0; j < sample.cols(); ++j) out << "," << sample(i, j);
    out << "\n";
  }
}

struct CellLayout {
  // thresholds laid out per level as [normal, permutation]
  std::vector<double> levels;
  int thresholds_per_level = 2;
  int count(int grid_points) const {
    return grid_points * static_cast<int>(levels.size()) * thresholds_per_level;
  }
};

// One replication: q values for every (grid point, level, method).
void replication_q_values(const DesignContext &ctx, int rep,
                          std::span<const std::vector<double>> grid,
                          std::span<double> q_out) {
  const ExperimentSpec &spec = ctx.spec;
  const Sample sample = ctx.generate(rep);
  const StreamScope scope{spec.cfg.seed, static_cast<std::uint64_t>(rep)};
  MeanInference engine(sample, spec.cfg, scope);

  const auto num_levels = static_cast<int>(spec.levels.size());
  std::vector<double> c_list(static_cast<std::size_t>(num_levels) * 2);
  for (int li = 0; li < num_levels; ++li) {
    const double alpha = 1.0 - spec.levels[li];
    const double level = alpha - spec.cfg.beta;
    c_list[2 * li] = normal_quantile(1.0 - level);
    c_list[2 * li + 1] = critical_value_from_sorted(engine.permutation_reference(), level);
  }

  std::vector<int> counts(grid.size() * c_list.size(), 0);
  engine.confidence_counts(grid, c_list, counts);
  for (std::size_t idx = 0; idx < counts.size(); ++idx)
    q_out[idx] = static_cast<double>(counts[idx]) / spec.cfg.S;
}

std::vector<CoverageRow> run_grid_coverage(const ExperimentSpec &spec_in,
                                           const RunOptions &options,
                                           std::span<const double> mu_points) {
  ExperimentSpec spec = spec_in;
  spec.validate();
  spec.cfg = spec.cfg.bound_to(spec.n);
  const auto t0 = std::chrono::steady_clock::now();

#ifdef _OPENMP
  if (options.threads > 0) omp_set_num_threads(options.threads);
#endif

  const DesignContext ctx(spec, options);
  if (!options.dump_samples.empty()) maybe_dump_sample(options, ctx.generate(0));

  std::vector<std::vector<double>> grid;
  grid.reserve(mu_points.size());
  for (double mu : mu_points) grid.push_back({mu});

  const auto num_levels = static_cast<int>(spec.levels.size());
  const std::size_t per_rep = grid.size() * static_cast<std::size_t>(num_levels) * 2;
  std::vector<double> q_values(static_cast<std::size_t>(spec.mc_reps) * per_rep, 0.0);

  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
  for (int rep = 0; rep < spec.mc_reps; ++rep) {
    try {
      replication_q_values(ctx, rep, grid,
                           std::span<double>(q_values.data() + per_rep * rep, per_rep));
    } catch (...) {
#pragma omp critical
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);

  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  // aggregate in fixed (grid, level, method) order
  std::vector<CoverageRow> rows;
  rows.reserve(per_rep);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    for (int li = 0; li < num_levels; ++li) {
      for (int method = 0; method < 2; ++method) {
        const double alpha = 1.0 - spec.levels[li];
        double acc = 0.0;
        for (int rep = 0; rep < spec.mc_reps; ++rep) {
          const double q =
              q_values[per_rep * rep + (k * num_levels + li) * 2 + method];
          acc += (options.mode == CoverageMode::Set) ? (q >= 1.0 - alpha ? 1.0 : 0.0) : q;
        }
        CoverageRow row;
        row.design = design_name(spec.design);
        row.n = spec.n;
        row.lambda_graph = spec.lambda_graph;
        row.m_attach = spec.m_attach;
        row.mix_c = spec.mix_c;
        row.rho = spec.rho;
        row.mu = mu_points[k];
        row.level = spec.levels[li];
        row.method = method == 0 ? "normal" : "permutation";
        row.coverage = acc / spec.mc_reps;
        row.mc_se = std::sqrt(row.coverage * (1.0 - row.coverage) / spec.mc_reps);
        row.wall_time_s = wall;
        rows.push_back(std::move(row));
      }
    }
  }
  return rows;
}

}  // namespace

std::vector<CoverageRow> run_simulate(const ExperimentSpec &spec, const RunOptions &options) {
  const double mu0[1] = {0.0};
  return run_grid_coverage(spec, options, mu0);
}

std::vector<CoverageRow> run_coverage_curve(const ExperimentSpec &spec,
                                            const RunOptions &options) {
  if (spec.mu_grid.empty())
    throw std::invalid_argument("coverage curve: spec must provide mu_grid");
  return run_grid_coverage(spec, options, spec.mu_grid);
}

std::vector<LambdaRow> run_lambda(const ExperimentSpec &spec, std::span<const int> sizes,
                                  std::span<const int> ks, LambdaMethod method,
                                  long num_draws) {
  std::vector<LambdaRow> rows;
  for (int n : sizes) {
    ExperimentSpec sized = spec;
    sized.n = n;
    sized.validate();
    SymmetricMatrix cov = SymmetricMatrix::identity(n);
    if (sized.design == Design::DepGraphER || sized.design == Design::DepGraphBA) {
      const StreamScope scope{sized.cfg.seed, 0};
      RngStream rng = scope.stream(stream_purpose::kGraph);
      const Graph graph = (sized.design == Design::DepGraphBA)
                              ? barabasi_albert(n, sized.m_attach, rng)
                              : erdos_renyi(n, sized.lambda_graph, rng);
      // single-edge correlation of the mixing construction
      const double edge_corr = sized.mix_c * sized.mix_c;
      for (int i = 0; i < n; ++i)
        for (int j : graph.neighbors(i))
          if (j > i) cov.set(i, j, edge_corr);
    } else if (sized.design == Design::NetworkER) {
      const StreamScope scope{sized.cfg.seed, 0};
      RngStream rng = scope.stream(stream_purpose::kGraph);
      const Graph graph = erdos_renyi(n, sized.lambda_graph, rng);
      const DistanceMatrix dist = all_pairs_distances(graph);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < i; ++j)
          if (dist.reachable(i, j))
            cov.set(i, j, std::exp(-sized.rho * static_cast<double>(dist(i, j))));
    }
    for (int k : ks) {
      const LambdaReport report = lambda_k(cov, k, method, sized.cfg.seed, num_draws);
      LambdaRow row;
      row.n = n;
      row.k = k;
      row.lambda = report.lambda_value;
      row.bound = report.bound;
      row.method =
          report.method == LambdaMethod::ExactEnumeration ? "exact" : "monte-carlo";
      row.mc_se = report.mc_se;
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

std::string format_probability(double p) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", p);
  return buf;
}

Sample read_matrix_csv(std::istream &is, bool has_header) {
  std::vector<double> data;
  int cols = -1, rows = 0, line_no = 0;
  std::string line;
  while (std::getline(is, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (has_header && line_no == 1) continue;
    if (line.empty()) continue;
    int row_cols = 0;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      std::size_t used = 0;
      double value = 0.0;
      bool ok = true;
      try {
        value = std::stod(cell, &used);
      } catch (const std::exception &) {
        ok = false;
      }
      if (ok)
        while (used < cell.size() && (cell[used] == ' ' || cell[used] == '\t')) ++used;
      if (!ok || used != cell.size())
        throw std::invalid_argument("csv line " + std::to_string(line_no) +
                                    ": non-numeric cell '" + cell + "'");
      data.push_back(value);
      ++row_cols;
    }
    if (cols < 0)
      cols = row_cols;
    else if (row_cols != cols)
      throw std::invalid_argument("csv line " + std::to_string(line_no) + ": expected " +
                                  std::to_string(cols) + " columns, found " +
                                  std::to_string(row_cols));
    ++rows;
  }
  if (rows == 0) throw std::invalid_argument("csv: no data rows");
  return Sample(rows, cols, std::move(data));
}

void write_coverage_csv(std::ostream &os, std::span<const CoverageRow> rows, bool with_mu,
                        bool with_timing) {
  os << "design,n,lambda_graph,m_attach,mix_c,rho,";
  if (with_mu) os << "mu,";
  os << "level,method,coverage,mc_se";
  if (with_timing) os << ",wall_time_s";
  os << "\n";
  for (const auto &row : rows) {
    os << row.design << "," << row.n << "," << format_probability(row.lambda_graph) << ","
       << row.m_attach << "," << format_probability(row.mix_c) << ","
       << format_probability(row.rho) << ",";
    if (with_mu) {
      char mu_buf[64];
      std::snprintf(mu_buf, sizeof(mu_buf), "%.10g", row.mu);
      os << mu_buf << ",";
    }
    os << format_probability(row.level) << "," << row.method << ","
       << format_probability(row.coverage) << "," << format_probability(row.mc_se);
    if (with_timing) os << "," << format_probability(row.wall_time_s);
    os << "\n";
  }
}

void write_lambda_csv(std::ostream &os, std::span<const LambdaRow> rows) {
  os << "n,k,lambda,bound,method,mc_se\n";
  for (const auto &row : rows) {
    char lam[64], bnd[64], se[64];
    std::snprintf(lam, sizeof(lam), "%.10g", row.lambda);
    std::snprintf(bnd, sizeof(bnd), "%.10g", row.bound);
    std::snprintf(se, sizeof(se), "%.6g", row.mc_se);
    os << row.n << "," << row.k << "," << lam << "," << bnd << "," << row.method << "," << se
       << "\n";
  }
}

}  // namespace rsinfer
