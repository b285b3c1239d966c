#pragma once

#include <cstdint>

namespace esr {

// Counter-based uniform stream: every variate is a pure function of
// (seed, replication, variable). Draws are order-independent, so skipping
// unused variables or evaluating replications in parallel cannot change
// the result.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : seed_mixed_(mix(seed)), seed_(seed) {}

  std::uint64_t seed() const { return seed_; }

  // Uniform on (0, 1]; never 0, so -log(u) is always finite.
  double u01(std::uint64_t replication, std::uint64_t variable) const {
    const std::uint64_t h = hash(replication, variable);
    return static_cast<double>((h >> 11) + 1) * 0x1.0p-53;
  }

  // Uniform on the open interval (-1, 1).
  double symmetric(std::uint64_t replication, std::uint64_t variable) const {
    const std::uint64_t h = hash(replication, variable);
    return 2.0 * ((static_cast<double>(h >> 11) + 0.5) * 0x1.0p-53) - 1.0;
  }

 private:
  // splitmix64 finalizer; two chained rounds give full avalanche over the
  // structured (replication, variable) counters.
  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  std::uint64_t hash(std::uint64_t replication, std::uint64_t variable) const {
    return mix(mix(seed_mixed_ ^ replication) ^ variable);
  }

  std::uint64_t seed_mixed_;
  std::uint64_t seed_;
};

}  // namespace esr
