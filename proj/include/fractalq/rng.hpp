#pragma once

#include <cstdint>
#include <random>

namespace fractalq {

/// SplitMix64 finalizer; a bijective 64-bit mix.
std::uint64_t splitmix64(std::uint64_t x);

/// Seed of sub-stream `stream` of the generator seeded with `seed`
/// (e.g. intersection i of a corridor uses derive_seed(seed, i)).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

/// Portable Gaussian source: std::mt19937_64 (bit-exact across standard
/// libraries) feeding an explicit Box-Muller transform, because the output
/// of std::normal_distribution is implementation-defined. The only
/// platform dependence left is libm's log/sqrt/cos/sin rounding.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Standard normal deviate.
  double normal();

private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

} // namespace fractalq
