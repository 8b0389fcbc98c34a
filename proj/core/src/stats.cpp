#include "nfg/stats.hpp"

#include <algorithm>
#include <stdexcept>

namespace nfg {

double mean(const std::vector<double>& xs) {
  if (xs.empty()) throw std::invalid_argument("mean of empty sample");
  double s = 0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

double sample_variance(const std::vector<double>& xs) {
  if (xs.size() < 2) return 0.0;
  double m = mean(xs);
  double s = 0;
  for (double x : xs) s += (x - m) * (x - m);
  return s / static_cast<double>(xs.size() - 1);
}

double standard_error(const std::vector<double>& xs) {
  if (xs.empty()) return 0.0;
  return std::sqrt(sample_variance(xs) / static_cast<double>(xs.size()));
}

std::pair<double, double> bootstrap_mean_ci(const std::vector<double>& xs, double level,
                                            int resamples, uint64_t seed) {
  if (xs.empty()) throw std::invalid_argument("bootstrap of empty sample");
  RngStream rng(seed);
  int n = static_cast<int>(xs.size());
  std::vector<double> means;
  means.reserve(resamples);
  for (int r = 0; r < resamples; ++r) {
    double s = 0;
    for (int i = 0; i < n; ++i) s += xs[rng.uniform_int(n)];
    means.push_back(s / n);
  }
  std::sort(means.begin(), means.end());
  double alpha = (1.0 - level) / 2.0;
  auto pick = [&](double q) {
    int idx = static_cast<int>(q * (resamples - 1) + 0.5);
    idx = std::max(0, std::min(resamples - 1, idx));
    return means[idx];
  };
  return {pick(alpha), pick(1.0 - alpha)};
}

}  // namespace nfg
