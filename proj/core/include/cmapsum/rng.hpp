#pragma once

#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

namespace cmapsum {

// Deterministic random source. Draws are hand-rolled on top of
// std::mt19937_64 because the standard <random> distributions are
// implementation-defined and would break cross-platform reproducibility.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) { scramble(); }

  std::uint64_t next() {
    // xorshift64* - tiny, fully specified, identical everywhere.
    state_ ^= state_ >> 12;
    state_ ^= state_ << 25;
    state_ ^= state_ >> 27;
    return state_ * 0x2545F4914F6CDD1DULL;
  }

  // Uniform double in [0, 1).
  double uniform() { return std::ldexp(static_cast<double>(next() >> 11), -53); }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [0, n). n must be > 0.
  std::size_t index(std::size_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % static_cast<std::uint64_t>(n);
    std::uint64_t r = next();
    while (r >= limit) r = next();
    return static_cast<std::size_t>(r % static_cast<std::uint64_t>(n));
  }

  // Box-Muller with a cached spare draw.
  double normal(double mean = 0.0, double stddev = 1.0) {
    if (has_spare_) {
      has_spare_ = false;
      return mean + stddev * spare_;
    }
    double u1 = uniform();
    while (u1 <= 1e-300) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * 3.14159265358979323846 * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return mean + stddev * r * std::cos(theta);
  }

  // Fisher-Yates.
  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[index(i)]);
    }
  }

 private:
  void scramble() {
    // Avoid the all-zero state and decorrelate small seeds.
    state_ += 0x9E3779B97F4A7C15ULL;
    for (int i = 0; i < 4; ++i) next();
  }

  std::uint64_t state_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace cmapsum
