#pragma once

#include <cmath>
#include <cstdint>

namespace donsker {

// Identifies one reproducible random stream. (seed, stream_id) fully
// determines the output; distinct stream_ids yield statistically
// independent substreams because the id is hashed into the key instead of
// jumping along a shared sequence, so parallel use is order-independent.
struct SeededStream {
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;
};

namespace detail {

// SplitMix64 finalizer (Vigna / Steele et al.). Bijective on 64-bit words.
inline constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

}  // namespace detail

// Counter-based generator, fixed project-wide: word i of a stream is
// mix64(key + i * golden) with key derived by hashing (seed, stream_id).
// This is the SplittableRandom/SplitMix64 construction. Consumption per
// variate is fixed (one word for uniform/exponential/sign, two for one
// normal), so a stream's content never depends on call interleaving.
class CounterRng {
 public:
  explicit CounterRng(SeededStream s)
      : key_(derive_key(s.seed, s.stream_id)) {}
  CounterRng(std::uint64_t seed, std::uint64_t stream_id)
      : CounterRng(SeededStream{seed, stream_id}) {}

  std::uint64_t next_u64() {
    state_ += detail::kGolden;
    return detail::mix64(key_ ^ state_);
  }

  // Uniform on the open interval (0,1); never returns an endpoint, so
  // log() of the result is always finite.
  double next_unit() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  // Standard normal via Box-Muller. Consumes exactly two words.
  double next_normal() {
    const double u1 = next_unit();
    const double u2 = next_unit();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(6.283185307179586476925286766559 * u2);
  }

  // Uniform integer in [0, bound). Multiply-shift; bias is O(bound/2^64).
  std::uint64_t next_below(std::uint64_t bound) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next_u64()) * bound) >> 64);
  }

 private:
  static std::uint64_t derive_key(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t k = detail::mix64(seed + detail::kGolden);
    k ^= detail::mix64(stream + 0xD1B54A32D192ED03ULL);
    return detail::mix64(k);
  }

  std::uint64_t key_;
  std::uint64_t state_ = 0;
};

}  // namespace donsker
