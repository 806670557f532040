#pragma once

#include <cstdint>
#include <string_view>

namespace audit {

// Counter-based generator: output i is a pure function of (seed, i), so a
// stream can be resumed from any cursor position in O(1). Not cryptographic.
class Rng {
 public:
  Rng() = default;
  Rng(std::uint64_t seed, std::uint64_t cursor = 0) : seed_(seed), cursor_(cursor) {}

  std::uint64_t next_u64() {
    std::uint64_t z = seed_ + (cursor_++ + 1) * 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1).
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform in [0, n). Multiply-shift map; bias is negligible for our ranges.
  std::uint64_t next_below(std::uint64_t n) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
  }

  bool next_bernoulli(double p) { return next_double() < p; }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t cursor() const { return cursor_; }
  void set_cursor(std::uint64_t c) { cursor_ = c; }

 private:
  std::uint64_t seed_ = 0;
  std::uint64_t cursor_ = 0;
};

inline std::uint64_t mix_seed(std::uint64_t seed, std::string_view tag) {
  // FNV-1a over the tag, folded into the seed through one splitmix round.
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : tag) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  std::uint64_t z = seed ^ h;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t z = seed + salt * 0x9E3779B97F4A7C15ULL + 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace audit
