#include "rsinfer/local_dependence.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rsinfer/prefix.hpp"

namespace rsinfer {

double pair_dependence(const SymmetricMatrix &cov, std::span<const int> a1,
                       std::span<const int> a2) {
  if (a1.empty() || a2.empty())
    throw std::invalid_argument("pair_dependence: sets must be non-empty");
  for (int i : a1)
    for (int j : a2)
      if (i == j) throw std::invalid_argument("pair_dependence: sets must be disjoint");
  if (a1.size() == 1 && a2.size() == 1) return std::fabs(cov(a1[0], a2[0]));
  Eigen::MatrixXd block(a1.size(), a2.size());
  for (std::size_t r = 0; r < a1.size(); ++r)
    for (std::size_t c = 0; c < a2.size(); ++c) block(r, c) = cov(a1[r], a2[c]);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(block);
  return svd.singularValues()[0];
}

double set_dependence(const SymmetricMatrix &cov, std::span<const int> a) {
  const auto s = static_cast<int>(a.size());
  if (s == 0) throw std::invalid_argument("set_dependence: set must be non-empty");
  if (s == 1) return cov(a[0], a[0]);
  if (s > 12) throw std::invalid_argument("set_dependence: set too large (bipartition blowup)");
  double best = std::numeric_limits<double>::infinity();
  std::vector<int> part1, part2;
  // element a[0] stays in part1; the mask assigns the rest
  for (unsigned mask = 1; mask < (1u << (s - 1)); ++mask) {
    part1.assign(1, a[0]);
    part2.clear();
    for (int i = 1; i < s; ++i) {
      if (mask & (1u << (i - 1)))
        part2.push_back(a[i]);
      else
        part1.push_back(a[i]);
    }
    best = std::min(best, pair_dependence(cov, part1, part2));
    if (best == 0.0) break;
  }
  return best;
}

int implied_max_degree(const SymmetricMatrix &cov) {
  int best = 0;
  for (int i = 0; i < cov.dim(); ++i) {
    int deg = 0;
    for (int j = 0; j < cov.dim(); ++j)
      if (j != i && cov(i, j) != 0.0) ++deg;
    best = std::max(best, deg);
  }
  return best;
}

namespace {

double exact_lambda(const SymmetricMatrix &cov, int k) {
  const int n = cov.dim();
  // every size-k subset once; sorted before summation so the value is
  // invariant to relabeling of the covariance
  std::vector<double> values;
  std::vector<int> subset(k);
  for (int i = 0; i < k; ++i) subset[i] = i;
  while (true) {
    values.push_back(set_dependence(cov, subset));
    int pos = k - 1;
    while (pos >= 0 && subset[pos] == n - k + pos) --pos;
    if (pos < 0) break;
    ++subset[pos];
    for (int i = pos + 1; i < k; ++i) subset[i] = subset[i - 1] + 1;
  }
  std::sort(values.begin(), values.end());
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

}  // namespace

LambdaReport lambda_k(const SymmetricMatrix &cov, int k, LambdaMethod method,
                      std::uint64_t seed, long num_draws) {
  const int n = cov.dim();
  if (k < 1 || k > 8) throw std::invalid_argument("lambda_k: k must be in [1, 8]");
  if (k > n) throw std::invalid_argument("lambda_k: k exceeds the design size");
  LambdaReport report;
  report.n = n;
  report.k = k;
  report.method = method;
  const int d = implied_max_degree(cov);
  report.bound = std::pow(static_cast<double>(n), std::floor(k / 2.0) - k) *
                 std::pow(static_cast<double>(d), std::floor((k + 1) / 2.0));

  if (method == LambdaMethod::ExactEnumeration) {
    if (n > 10)
      throw std::invalid_argument("lambda_k: exact enumeration limited to n <= 10");
    report.lambda_value = (k == 1 && n == 1) ? cov(0, 0) : exact_lambda(cov, k);
    return report;
  }

  if (num_draws < 1) throw std::invalid_argument("lambda_k: need at least one draw");
  PrefixSampler sampler(n);
  RngStream rng(seed, make_stream_id(0, 0, stream_purpose::kLambdaMc));
  PermutationPrefix prefix;
  double sum = 0.0, sum_sq = 0.0;
  for (long t = 0; t < num_draws; ++t) {
    if (k >= 2) {
      sampler.draw(k, rng, prefix);
    } else {
      prefix.assign(1, static_cast<int>(rng.uniform_below(n)));
    }
    const double v = set_dependence(cov, prefix);
    sum += v;
    sum_sq += v * v;
  }
  const double mean = sum / static_cast<double>(num_draws);
  const double var = std::max(0.0, sum_sq / num_draws - mean * mean);
  report.lambda_value = mean;
  report.mc_se = std::sqrt(var / static_cast<double>(num_draws));
  return report;
}

}  // namespace rsinfer
