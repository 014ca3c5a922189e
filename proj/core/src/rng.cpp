#include "fsim/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace fsim {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t state = master;
  std::uint64_t mixed = splitmix64(state);
  state = mixed ^ (index + 0x9E3779B97F4A7C15ULL);
  splitmix64(state);  // decorrelate adjacent indices
  return splitmix64(state);
}

double Rng::uniform() {
  return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double a, double b) { return a + (b - a) * uniform(); }

double Rng::normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  double u, v, s;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double factor = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * factor;
  have_spare_ = true;
  return u * factor;
}

double Rng::normal(double mean, double sd) { return mean + sd * normal(); }

std::uint64_t Rng::bounded(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("Rng::bounded: n must be >= 1");
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
  std::uint64_t x;
  do {
    x = eng_();
  } while (x >= limit);
  return x % n;
}

std::uint64_t Rng::child_seed() {
  std::uint64_t state = eng_();
  return splitmix64(state);
}

}  // namespace fsim
