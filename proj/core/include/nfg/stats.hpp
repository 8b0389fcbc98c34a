#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "nfg/rng.hpp"

namespace nfg {

inline double gaussian_pdf(double x, double mu, double sigma) {
  double z = (x - mu) / sigma;
  return std::exp(-0.5 * z * z) / (sigma * 2.5066282746310005024);
}

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x * 0.7071067811865475244); }

double mean(const std::vector<double>& xs);
double sample_variance(const std::vector<double>& xs);
double standard_error(const std::vector<double>& xs);

// Percentile bootstrap confidence interval for the mean. Deterministic for a
// fixed seed, so reported intervals are reproducible.
std::pair<double, double> bootstrap_mean_ci(const std::vector<double>& xs, double level,
                                            int resamples, uint64_t seed);

}  // namespace nfg
