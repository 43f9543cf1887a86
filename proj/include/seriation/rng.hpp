#pragma once

// Counter-based random streams. A draw is a pure function of
// (seed, stream tag, counters), so results do not depend on the order in
// which draws are made or on how work is split across threads.

#include <cstdint>
#include <initializer_list>
#include <string_view>

namespace seriation::rng {

inline constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline constexpr std::uint64_t tag_hash(std::string_view tag) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
  for (char c : tag) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

/// A named stream derived from a root seed. Draws are indexed by up to a
/// handful of 64-bit counters.
class Stream {
 public:
  constexpr Stream(std::uint64_t seed, std::string_view tag) noexcept
      : key_(mix64(mix64(seed) ^ tag_hash(tag))) {}

  constexpr std::uint64_t bits(std::initializer_list<std::uint64_t> counters) const noexcept {
    std::uint64_t h = key_;
    for (std::uint64_t c : counters) h = mix64(h ^ mix64(c + 0x632be59bd9b4e019ULL));
    return mix64(h);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  constexpr double uniform(std::initializer_list<std::uint64_t> counters) const noexcept {
    return static_cast<double>(bits(counters) >> 11) * 0x1.0p-53;
  }

  /// Derive an independent child stream, e.g. one per experiment cell.
  constexpr Stream child(std::string_view tag, std::uint64_t index) const noexcept {
    Stream s = *this;
    s.key_ = mix64(key_ ^ mix64(tag_hash(tag) + index));
    return s;
  }

 private:
  std::uint64_t key_;
};

/// Uniform integer in [0, bound) by multiply-shift.
inline std::uint64_t below(std::uint64_t random_bits, std::uint64_t bound) noexcept {
  __extension__ using u128 = unsigned __int128;
  return static_cast<std::uint64_t>((static_cast<u128>(random_bits) * bound) >> 64);
}

}  // namespace seriation::rng
