#pragma once

#include <array>
#include <cstdint>
#include <span>

namespace mmf {

// Threefry2x64-20 counter-based generator. Stateless: every output is a pure
// function of (key, counter), so draws are reproducible and independent of
// evaluation order. Constants from the Threefish/Random123 specification.
namespace detail {

constexpr std::uint64_t kThreefryParity = 0x1BD11BDAA9FC1A22ull;
constexpr std::array<unsigned, 8> kThreefryRot = {16, 42, 12, 31, 16, 32, 24, 21};

constexpr std::uint64_t rotl64(std::uint64_t x, unsigned r) {
  return (x << r) | (x >> (64u - r));
}

constexpr std::array<std::uint64_t, 2> threefry2x64(std::array<std::uint64_t, 2> ctr,
                                                    std::array<std::uint64_t, 2> key) {
  const std::array<std::uint64_t, 3> ks = {key[0], key[1],
                                           key[0] ^ key[1] ^ kThreefryParity};
  std::uint64_t x0 = ctr[0] + ks[0];
  std::uint64_t x1 = ctr[1] + ks[1];
  for (unsigned round = 0; round < 20; ++round) {
    x0 += x1;
    x1 = rotl64(x1, kThreefryRot[round % 8]);
    x1 ^= x0;
    if (round % 4 == 3) {
      const unsigned s = round / 4 + 1;
      x0 += ks[s % 3];
      x1 += ks[(s + 1) % 3] + s;
    }
  }
  return {x0, x1};
}

}  // namespace detail

/// Counter-based RNG keyed by a 64-bit seed. `stream` separates independent
/// uses (draw index, bootstrap replicate, ...), `counter` indexes within a
/// stream (position in a tuple, ...).
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t seed() const { return seed_; }

  std::uint64_t raw(std::uint64_t stream, std::uint64_t counter) const {
    return detail::threefry2x64({stream, counter}, {seed_, 0x6d6d6669656c64ull})[0];
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform01(std::uint64_t stream, std::uint64_t counter) const {
    return static_cast<double>(raw(stream, counter) >> 11) * 0x1.0p-53;
  }

  /// Index into a discrete distribution given by cumulative weights
  /// (cumulative[k] = w_0 + ... + w_k, last entry = total mass).
  std::size_t pick(std::span<const double> cumulative, std::uint64_t stream,
                   std::uint64_t counter) const {
    const double u = uniform01(stream, counter) * cumulative.back();
    std::size_t lo = 0, hi = cumulative.size() - 1;
    while (lo < hi) {
      const std::size_t mid = (lo + hi) / 2;
      if (cumulative[mid] > u)
        hi = mid;
      else
        lo = mid + 1;
    }
    return lo;
  }

  /// Derives an independent 64-bit seed, for spawning per-replicate rngs.
  std::uint64_t derive(std::uint64_t stream, std::uint64_t counter = 0) const {
    return detail::threefry2x64({stream, counter}, {seed_, 0x7365656473ull})[1];
  }

 private:
  std::uint64_t seed_;
};

}  // namespace mmf
