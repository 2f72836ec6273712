#pragma once

#include <array>
#include <cstdint>

namespace spearsift {

// SplitMix64 step; used for seeding and for deriving independent stream seeds.
std::uint64_t splitmix64(std::uint64_t& state);

// Seed for sub-stream `stream` of `seed`. Forest trees, CV folds and synthetic
// label groups each draw from their own derived stream so results do not
// depend on scheduling order.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

// xoshiro256** 1.0 (Blackman & Vigna), state filled by SplitMix64.
// Distributions are implemented here rather than taken from <random> because
// the standard distributions are implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next();
  // Uniform in [0, 1) with 53 random bits.
  double uniform();
  // Uniform integer in [0, n); n > 0. Unbiased (Lemire's method).
  std::uint64_t below(std::uint64_t n);
  // Standard normal (Marsaglia polar method).
  double normal();
  double normal(double mean, double sd) { return mean + sd * normal(); }
  // Gamma(shape, 1) by Marsaglia-Tsang; shape > 0.
  double gamma(double shape);
  double beta(double a, double b);
  bool bernoulli(double p) { return uniform() < p; }

 private:
  std::array<std::uint64_t, 4> s_{};
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace spearsift
