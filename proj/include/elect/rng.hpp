#pragma once

#include <cstdint>
#include <limits>

namespace elect {

/// SplitMix64: a 64-bit generator whose whole state is one counter, so
/// streams can be derived from arbitrary keys at negligible cost.
class SplitMix64 {
public:
  using result_type = std::uint64_t;

  explicit constexpr SplitMix64(std::uint64_t seed = 0) noexcept : state_(seed) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  constexpr result_type operator()() noexcept {
    state_ += 0x9e3779b97f4a7c15ULL;
    return finalize(state_);
  }

  static constexpr std::uint64_t finalize(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

private:
  std::uint64_t state_;
};

using Rng = SplitMix64;

/// Hash a sequence of keys into a seed. Distinct key tuples give
/// independent-looking streams.
constexpr std::uint64_t derive_seed(std::uint64_t seed) noexcept {
  return SplitMix64::finalize(seed + 0x9e3779b97f4a7c15ULL);
}

template <typename... Keys>
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t key, Keys... rest) noexcept {
  return derive_seed(SplitMix64::finalize(seed ^ (key * 0xd1342543de82ef95ULL + 0x2545f4914f6cdd1dULL)) +
                         0x632be59bd9b4e019ULL,
                     static_cast<std::uint64_t>(rest)...);
}

// Stream domains keep derived seeds for unrelated purposes apart.
namespace stream {
inline constexpr std::uint64_t node = 1;
inline constexpr std::uint64_t ports = 2;
inline constexpr std::uint64_t graph = 3;
inline constexpr std::uint64_t trial = 4;
inline constexpr std::uint64_t sampling = 5;
}  // namespace stream

/// Seed of the private coin stream of `node` in `round` (round 0 = initialization).
constexpr std::uint64_t node_stream_seed(std::uint64_t master, std::uint64_t node, std::uint64_t round) noexcept {
  return derive_seed(master, stream::node, node, round);
}

constexpr std::uint64_t trial_seed(std::uint64_t master, std::uint64_t trial) noexcept {
  return derive_seed(master, stream::trial, trial);
}

}  // namespace elect
