#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>

namespace detlim {

// All randomness flows through this stream: an mt19937_64 engine with
// hand-rolled distributions, so a seed reproduces the same draws within one
// build. Substreams derived from (master seed, index) are decorrelated and
// let callers parallelize across tasks.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

  static RandomStream substream(std::uint64_t master_seed, std::uint64_t index) {
    return RandomStream(mix(master_seed ^ mix(index + 0x9e3779b97f4a7c15ull)));
  }

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0,1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("rng: below(0)");
    std::uint64_t mask = ~0ull >> __builtin_clzll(n | 1);
    for (;;) {
      std::uint64_t x = engine_() & mask;
      if (x < n) return x;
    }
  }

  bool bernoulli(double p) { return uniform() < p; }

  // Poisson by CDF inversion, exact to double precision for small means.
  int poisson(double mean) {
    if (mean < 0.0 || mean > 32.0)
      throw std::invalid_argument("rng: poisson mean out of supported range [0,32]");
    const double u = uniform();
    double pmf = std::exp(-mean);
    double cdf = pmf;
    int x = 0;
    while (u >= cdf && x < 4096) {
      ++x;
      pmf *= mean / x;
      cdf += pmf;
    }
    return x;
  }

  // Binomial(n, p) by CDF inversion from 0; efficient when n*p is modest.
  long long binomial(long long n, double p) {
    if (n < 0) throw std::invalid_argument("rng: binomial n < 0");
    if (n == 0 || p <= 0.0) return 0;
    if (p >= 1.0) return n;
    const double u = uniform();
    double pmf = std::exp(static_cast<double>(n) * std::log1p(-p));
    if (pmf < 1e-300)
      throw std::invalid_argument("rng: binomial inversion underflow (n*p too large)");
    const double ratio = p / (1.0 - p);
    double cdf = pmf;
    long long x = 0;
    while (u >= cdf && x < n) {
      pmf *= ratio * static_cast<double>(n - x) / static_cast<double>(x + 1);
      ++x;
      cdf += pmf;
    }
    return x;
  }

 private:
  // splitmix64 finalizer
  static std::uint64_t mix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
  }

  std::mt19937_64 engine_;
};

}  // namespace detlim
