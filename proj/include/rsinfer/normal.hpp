#pragma once

#include <cmath>
#include <stdexcept>

namespace rsinfer {

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

// Standard-normal quantile, Wichura's AS 241 (PPND16). Accurate to full
// double precision over (0,1); the round trip with normal_cdf holds to 1e-12
// for p in [1e-8, 1-1e-8].
double normal_quantile(double p);

}  // namespace rsinfer
