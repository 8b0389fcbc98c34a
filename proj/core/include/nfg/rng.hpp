#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace nfg {

// splitmix64 step; used for seed derivation so that distinct work items
// (encounters, sweep points, rollouts) get decorrelated streams.
inline uint64_t splitmix64(uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline uint64_t derive_seed(uint64_t root, uint64_t a, uint64_t b = 0, uint64_t c = 0) {
  uint64_t s = root;
  uint64_t h = splitmix64(s);
  s ^= a + 0x165667b19e3779f9ULL;
  h ^= splitmix64(s);
  s ^= b + 0x27d4eb2f165667c5ULL;
  h ^= splitmix64(s);
  s ^= c + 0x85ebca77c2b2ae63ULL;
  h ^= splitmix64(s);
  return h;
}

// Deterministic random stream. All draws are implemented directly on top of
// the raw 64-bit output so results do not depend on the standard library's
// distribution implementations.
class RngStream {
 public:
  explicit RngStream(uint64_t seed) : gen_(seed) {}

  uint64_t next_u64() { return gen_(); }

  // Uniform in [0, 1).
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  // Uniform integer in [0, n), rejection-free of modulo bias.
  int uniform_int(int n) {
    if (n <= 0) return 0;
    uint64_t un = static_cast<uint64_t>(n);
    uint64_t limit = UINT64_MAX - UINT64_MAX % un;
    uint64_t x;
    do {
      x = gen_();
    } while (x >= limit);
    return static_cast<int>(x % un);
  }

  bool bernoulli(double p) { return uniform() < p; }

  // Standard normal via Box-Muller; one value per call.
  double gaussian() {
    double u1 = (static_cast<double>(gen_() >> 11) + 1.0) * 0x1.0p-53;  // (0, 1]
    double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586477 * u2);
  }

  double gaussian(double mu, double sigma) { return mu + sigma * gaussian(); }

  // Independent child stream for a named piece of work.
  RngStream split(uint64_t salt) { return RngStream(derive_seed(gen_(), salt)); }

 private:
  std::mt19937_64 gen_;
};

}  // namespace nfg
