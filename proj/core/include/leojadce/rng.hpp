#pragma once

// Counter-based random streams. Every Monte-Carlo trial owns a Philox4x32-10
// generator keyed by a hash of (master seed, scenario tag, trial index), so
// trials are reproducible in isolation and can run in any order or thread.

#include <array>
#include <cstdint>
#include <limits>

#include "leojadce/types.hpp"

namespace leojadce {

/// Philox4x32 with 10 rounds (Salmon et al. 2011). Satisfies
/// UniformRandomBitGenerator, producing 32-bit words.
class Philox4x32 {
 public:
  using result_type = std::uint32_t;

  Philox4x32() : Philox4x32(0) {}
  explicit Philox4x32(std::uint64_t key, std::uint64_t stream = 0);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()();

  /// Skips n outputs.
  void discard(std::uint64_t n);

  /// The bijection itself: 10 Philox rounds of `counter` under `key`.
  static std::array<std::uint32_t, 4> block(std::array<std::uint32_t, 4> counter,
                                            std::array<std::uint32_t, 2> key);

 private:
  void refill();

  std::array<std::uint32_t, 2> key_{};
  std::array<std::uint32_t, 4> counter_{};
  std::array<std::uint32_t, 4> block_{};
  unsigned position_ = 4;
};

using Rng = Philox4x32;

/// SplitMix64 finalizer; used to combine seed components.
std::uint64_t mix64(std::uint64_t x);

/// Key for the stream identified by (master_seed, tag, index).
std::uint64_t stream_key(std::uint64_t master_seed, std::uint64_t tag, std::uint64_t index);

/// Stable 64-bit tag for a floating-point axis value (bit pattern based;
/// -0.0 and 0.0 map to the same tag).
std::uint64_t value_tag(double value);

inline Rng make_stream(std::uint64_t master_seed, std::uint64_t tag, std::uint64_t index) {
  return Rng(stream_key(master_seed, tag, index));
}

/// Uniform double in [0, 1) with 53 random bits.
double uniform01(Rng& rng);
double uniform(Rng& rng, double lo, double hi);
/// Standard normal via Box-Muller (both outputs are not cached, so a stream's
/// consumption is a pure function of the call sequence).
double standard_normal(Rng& rng);
/// Circularly-symmetric complex Gaussian with total variance `variance`
/// (real and imaginary parts each N(0, variance / 2)).
Complex complex_normal(Rng& rng, double variance = 1.0);
bool bernoulli(Rng& rng, double p);

}  // namespace leojadce
