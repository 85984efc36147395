#pragma once

// Counter-based random streams.
//
// Every random quantity in a simulation is drawn from a stream identified by
// (master seed, replication, arm, purpose). The stream key is a hash of that
// tuple and the i-th output is a pure function of (key, i), so a replication's
// draws never depend on which thread ran it or in what order.

#include <cstdint>
#include <limits>

#include <boost/random/normal_distribution.hpp>

namespace bandit_clt {

enum class StreamPurpose : std::uint64_t {
  Reward = 1,
  TsNoise = 2,
  Auxiliary = 3,
};

namespace detail {

inline constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ull;

constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

}  // namespace detail

/// Hash (master, replication, arm, purpose) into a 64-bit stream key.
constexpr std::uint64_t derive_stream_key(std::uint64_t master, std::uint64_t replication,
                                          std::uint64_t arm, StreamPurpose purpose) noexcept {
  std::uint64_t h = detail::mix64(master + detail::kGolden);
  h = detail::mix64(h ^ (replication + 0x632be59bd9b4e019ull));
  h = detail::mix64(h ^ (arm + 0x8cb92ba72f3d8dd7ull));
  h = detail::mix64(h ^ (static_cast<std::uint64_t>(purpose) * 0xd6e8feb86659fd93ull));
  return h;
}

/// SplitMix64 output function over an explicit counter. Satisfies
/// UniformRandomBitGenerator so it can feed standard and Boost distributions.
class CounterStream {
 public:
  using result_type = std::uint64_t;

  constexpr CounterStream() noexcept = default;
  constexpr explicit CounterStream(std::uint64_t key, std::uint64_t counter = 0) noexcept
      : key_(key), counter_(counter) {}

  CounterStream(std::uint64_t master, std::uint64_t replication, std::uint64_t arm,
                StreamPurpose purpose) noexcept
      : key_(derive_stream_key(master, replication, arm, purpose)) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  constexpr result_type operator()() noexcept {
    ++counter_;
    return detail::mix64(key_ + counter_ * detail::kGolden);
  }

  /// Value the stream would produce at position `index` (1-based), without advancing.
  constexpr result_type at(std::uint64_t index) const noexcept {
    return detail::mix64(key_ + index * detail::kGolden);
  }

  /// Uniform on the open interval (0, 1), 53 bits of resolution.
  double uniform() noexcept {
    return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Standard normal draw (Boost ziggurat; fixed algorithm across platforms).
  double normal() {
    return boost::random::normal_distribution<double>(0.0, 1.0)(*this);
  }

  constexpr std::uint64_t key() const noexcept { return key_; }
  constexpr std::uint64_t counter() const noexcept { return counter_; }

 private:
  std::uint64_t key_ = 0;
  std::uint64_t counter_ = 0;
};

}  // namespace bandit_clt
