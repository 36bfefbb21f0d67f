#include "rsinfer/reference.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rsinfer/normal.hpp"

namespace rsinfer::reference {

double u_statistic_direct(const Sample &x, std::span<const double> mu,
                          const SymmetricMatrix &sigma_inv, const PermutationPrefix &prefix) {
  const int m = x.cols();
  const int b = static_cast<int>(prefix.size());
  double sum = 0.0;
  for (int i = 0; i < b; ++i) {
    for (int j = 0; j < b; ++j) {
      if (i == j) continue;
      const auto xi = x.row(prefix[i]);
      const auto xj = x.row(prefix[j]);
      double q = 0.0;
      for (int a = 0; a < m; ++a)
        for (int c = 0; c < m; ++c) q += (xi[a] - mu[a]) * sigma_inv(a, c) * (xj[c] - mu[c]);
      sum += q;
    }
  }
  return sum / (static_cast<double>(m) * b);
}

double s_statistic_direct(const Sample &x, std::span<const double> mu,
                          const PermutationBundle &bundle) {
  if (bundle.empty()) throw std::invalid_argument("s_statistic_direct: empty bundle");
  const SymmetricMatrix sigma_inv = invert_spd(sample_covariance(x));
  double sum = 0.0;
  for (const auto &prefix : bundle) sum += u_statistic_direct(x, mu, sigma_inv, prefix);
  return sum / std::sqrt(static_cast<double>(bundle.size()));
}

double t_statistic_direct(const Sample &x, std::span<const double> mu,
                          const PermutationBundle &bundle) {
  const double b = bundle.empty() ? 0.0 : static_cast<double>(bundle.front().size());
  const double bias = std::sqrt(static_cast<double>(bundle.size())) * b / x.rows();
  return s_statistic_direct(x, mu, bundle) - bias;
}

double permutation_critical_value_direct(const Sample &x, const InferenceConfig &cfg_in,
                                         const StreamScope &scope, double alpha) {
  const InferenceConfig cfg = cfg_in.bound_to(x.rows());
  const std::vector<double> xbar = sample_mean(x);
  std::vector<double> values(cfg.L);
  for (int l = 0; l < cfg.L; ++l) {
    RngStream rng = scope.stream(stream_purpose::kCritical, static_cast<std::uint64_t>(l));
    const PermutationBundle bundle = draw_bundle(rng, x.rows(), cfg.b_n, cfg.R);
    values[l] = s_statistic_direct(x, xbar, bundle);
  }
  std::sort(values.begin(), values.end());
  return critical_value_from_sorted(values, alpha);
}

double confidence_function_direct(const Sample &x, std::span<const double> mu,
                                  const InferenceConfig &cfg_in, const StreamScope &scope,
                                  double level) {
  const InferenceConfig cfg = cfg_in.bound_to(x.rows());
  const double c = (cfg.critical_value == CriticalValueMethod::AsymptoticNormal)
                       ? normal_quantile(1.0 - level)
                       : permutation_critical_value_direct(x, cfg, scope, level);
  const double bias = std::sqrt(static_cast<double>(cfg.R)) * cfg.b_n / x.rows();
  int count = 0;
  for (int s = 0; s < cfg.S; ++s) {
    RngStream rng = scope.stream(stream_purpose::kConfidence, static_cast<std::uint64_t>(s));
    const PermutationBundle bundle = draw_bundle(rng, x.rows(), cfg.b_n, cfg.R);
    const double t = s_statistic_direct(x, mu, bundle) - bias;
    if (t <= c) ++count;
  }
  return static_cast<double>(count) / cfg.S;
}

}  // namespace rsinfer::reference
