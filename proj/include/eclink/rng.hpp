#pragma once

// Deterministic, platform-stable random number generation.
//
// SplitMix64 is used directly as the stream generator: 64-bit counter
// advanced by the golden-gamma constant, finalized by two xor-multiply
// rounds.  Every sampler here is written out explicitly (no <random>
// distributions, whose outputs are implementation-defined) so that a
// (seed, stream) pair yields bit-identical sequences on every platform.
//
// Substream rule (stable, documented contract):
//   derive_seed(seed, stream) = mix64(seed + GOLDEN * (stream + 1))
// Replication i of any experiment draws arrivals from stream 2*i and
// channel states from stream 2*i + 1; a single queue simulation is
// replication 0 (arrivals stream 0, channel stream 1).

#include <cmath>
#include <cstdint>
#include <limits>

namespace eclink {

inline constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ull;

// SplitMix64 finalizer: bijective 64-bit mix.
inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  return mix64(seed + kGoldenGamma * (stream + 1));
}

class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    state_ += kGoldenGamma;
    return mix64(state_);
  }

  // Uniform on [0, 1): top 53 bits scaled by 2^-53.
  double u01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Unit-mean exponential; -log1p(-u) maps u01's closed-open range to
  // [0, 36.7...] without ever hitting log(0).
  double exponential() { return -std::log1p(-u01()); }

  // Exponential with the given rate; rate 0 means "never" (+infinity).
  double exponential(double rate) {
    if (rate <= 0.0) return std::numeric_limits<double>::infinity();
    return exponential() / rate;
  }

 private:
  std::uint64_t state_;
};

}  // namespace eclink
