#pragma once

#include <cstdint>
#include <random>

namespace fsim {

// splitmix64 step: advances state and returns the next value of the stream.
std::uint64_t splitmix64(std::uint64_t& state);

// Deterministic per-stream seed derived from a master seed and a stream index.
// Streams for distinct indices are decorrelated regardless of the master seed.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

// Deterministic random source. The variate algorithms are self-contained
// (not delegated to std::*_distribution) so that a given seed yields the
// same stream on every platform and standard-library version.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t raw() { return eng_(); }

  // Uniform on [0, 1) with 53-bit resolution.
  double uniform();
  double uniform(double a, double b);

  // Standard normal via the Marsaglia polar method.
  double normal();
  double normal(double mean, double sd);

  // Uniform integer on {0, ..., n-1} (n >= 1), rejection sampling (unbiased).
  std::uint64_t bounded(std::uint64_t n);

  // Seed for a dependent child stream (consumes one draw).
  std::uint64_t child_seed();

 private:
  std::mt19937_64 eng_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace fsim
