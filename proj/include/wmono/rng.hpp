#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "wmono/linalg.hpp"

namespace wmono {

// Seeded generator with hand-rolled distributions so that sequences are
// identical across standard library implementations (std::mt19937_64 is
// fully specified; the std distributions are not).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  // Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Standard normal via Box-Muller.
  double normal() {
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * pi() * u2);
  }

  // Complex standard normal (each component unit variance); consumes one
  // Box-Muller pair.
  cplx complex_normal() {
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    return {r * std::cos(2.0 * pi() * u2), r * std::sin(2.0 * pi() * u2)};
  }

  std::uint64_t raw() { return eng_(); }

 private:
  static constexpr double pi() { return 3.14159265358979323846; }
  std::mt19937_64 eng_;
};

// Decorrelated child seed for stream `stream` of a base seed (splitmix64).
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  std::uint64_t z = base + (stream + 1) * 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace wmono
