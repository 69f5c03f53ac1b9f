#ifndef SGOF_RNG_HPP
#define SGOF_RNG_HPP

#include <cmath>
#include <cstdint>

namespace sgof {

// 64-bit finalizer from SplitMix64 (Steele/Lea/Flood; Vigna's reference code).
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Deterministic substream of a SplitMix64 generator. The pair
// (master_seed, stream_id) is hashed into the initial state, so every
// stream produces the same sequence no matter which thread draws from it
// or in what order streams are created. This is what makes the Monte
// Carlo engine reproducible across worker counts.
class RngStream {
 public:
  static constexpr const char* kAlgorithm = "splitmix64";
  static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;

  constexpr RngStream(std::uint64_t master_seed, std::uint64_t stream_id) noexcept
      : state_(derive(master_seed, stream_id)) {}

  constexpr std::uint64_t next_u64() noexcept {
    state_ += kGamma;
    return mix64(state_);
  }

  // Uniform in [0,1) with 53-bit resolution.
  double next_double() noexcept {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Standard exponential via inversion; argument of log is in (0,1].
  double next_exponential() noexcept {
    return -std::log(1.0 - next_double());
  }

 private:
  static constexpr std::uint64_t derive(std::uint64_t master,
                                        std::uint64_t stream) noexcept {
    std::uint64_t h = mix64(master + kGamma);
    h = mix64(h ^ (stream + 0x6a09e667f3bcc909ULL));
    return h;
  }

  std::uint64_t state_;
};

// Stable stream-id derivation used by the simulation engine: one stream per
// (purpose, cell, replication) triple. Purposes keep independent parts of a
// run (null calibration, power draws, ...) on disjoint streams.
constexpr std::uint64_t stream_id_for(std::uint64_t purpose, std::uint64_t cell,
                                      std::uint64_t replication) noexcept {
  std::uint64_t h = mix64(purpose + 0x243f6a8885a308d3ULL);
  h = mix64(h ^ (cell + 0x13198a2e03707344ULL));
  h = mix64(h ^ (replication + 0xa4093822299f31d0ULL));
  return h;
}

}  // namespace sgof

#endif  // SGOF_RNG_HPP
