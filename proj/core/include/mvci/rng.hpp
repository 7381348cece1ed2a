#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace mvci {

// Deterministic across platforms: every variate is an explicit transform of
// mt19937_64 output, no std::*_distribution involved.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1), 53 random bits.
  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // Standard normal, Box-Muller; the second variate of each pair is cached.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform01();
    while (u1 <= 0.0) u1 = uniform01();
    double u2 = uniform01();
    double r = std::sqrt(-2.0 * std::log(u1));
    double theta = 2.0 * kPi * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
  }

  // Cauchy by inverse transform; heavy tails are intentional.
  double cauchy(double location, double scale) {
    return location + scale * std::tan(kPi * (uniform01() - 0.5));
  }

  // Integer in [0, bound); modulo bias is negligible for bound << 2^64.
  std::size_t index(std::size_t bound) {
    return static_cast<std::size_t>(engine_() % bound);
  }

 private:
  static constexpr double kPi = 3.14159265358979323846;
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// Stable child seed for (base, index); splitmix64 finalizer.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
  std::uint64_t z = base ^ (0x9E3779B97F4A7C15ull * (index + 1));
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ull;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBull;
  z ^= z >> 31;
  return z;
}

}  // namespace mvci
