#pragma once

#include <cstdint>

namespace planta {

/// Stateless counter-based noise. Every draw is a pure function of
/// (seed, stream, counter), so results do not depend on call order or on the
/// standard library's distribution implementations.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t bits(std::uint64_t stream, std::uint64_t counter) const;
  /// Uniform on the open interval (0, 1).
  double uniform(std::uint64_t stream, std::uint64_t counter) const;
  /// Standard normal via Box-Muller on two uniforms.
  double normal(std::uint64_t stream, std::uint64_t counter) const;

  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
};

/// Stable 64-bit id for a channel name, used as a stream number.
std::uint64_t stream_id(const char* name);

}  // namespace planta
