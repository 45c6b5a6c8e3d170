#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace gesture {

/// 64-bit FNV-1a over a byte sequence, finished with the splitmix64 mixer.
/// Stable across platforms and builds, unlike std::hash.
class StableHash {
 public:
  StableHash& add(std::string_view bytes) {
    for (unsigned char c : bytes) {
      state_ ^= c;
      state_ *= 0x100000001b3ULL;
    }
    // Length terminator so ("ab","c") and ("a","bc") differ.
    return add_u64(bytes.size());
  }

  StableHash& add_u64(std::uint64_t value) {
    for (int i = 0; i < 8; ++i) {
      state_ ^= (value >> (8 * i)) & 0xffU;
      state_ *= 0x100000001b3ULL;
    }
    return *this;
  }

  std::uint64_t digest() const {
    std::uint64_t z = state_ + 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_ = 0xcbf29ce484222325ULL;
};

/// Seeded stream with platform-independent draws. The std distributions are
/// implementation-defined, so uniform values are built from raw engine bits.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, n), rejection-sampled to avoid modulo bias.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % n;
  }

  /// Independent child stream keyed by a stage tag.
  Rng fork(std::string_view tag) { return Rng(StableHash().add_u64(engine_()).add(tag).digest()); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace gesture
