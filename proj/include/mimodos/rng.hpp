#pragma once

// All randomness derives from a single 64-bit master seed expanded into named
// substreams:
//
//   stream_seed = mix64(mix64(master ^ fnv1a64(name)) ^ golden*(index+1))
//
// with mix64 the SplitMix64 finalizer and golden = 0x9E3779B97F4A7C15. Each
// stream is a std::mt19937_64 (whose output sequence the standard fully
// specifies), uniforms come from explicit bit manipulation, and normals from
// the Marsaglia polar method on top of them — no std::*_distribution anywhere,
// since those are implementation-defined and would break cross-platform
// reproducibility.

#include <cstdint>
#include <random>
#include <string_view>
#include <utility>

namespace mimodos {

// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001B3ULL;
  }
  return h;
}

constexpr std::uint64_t derive_seed(std::uint64_t master, std::string_view name,
                                    std::uint64_t index = 0) {
  std::uint64_t x = mix64(master ^ fnv1a64(name));
  return mix64(x ^ (0x9E3779B97F4A7C15ULL * (index + 1)));
}

class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : eng_(seed) {}
  RngStream(std::uint64_t master, std::string_view name, std::uint64_t index = 0)
      : eng_(derive_seed(master, name, index)) {}

  std::uint64_t raw() { return eng_(); }

  // 53-bit uniform on [0, 1).
  double uniform01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
  // 53-bit uniform on (0, 1]; safe as a log argument.
  double uniform_pos() {
    return static_cast<double>((eng_() >> 11) + 1) * 0x1.0p-53;
  }
  // Exact success probability p for p in [0, 1]; p == 1 always succeeds.
  bool bernoulli(double p) { return uniform01() < p; }

  // Two independent standard normals (Marsaglia polar method).
  std::pair<double, double> normal_pair();
  // Exp(1) draw.
  double exponential();

 private:
  std::mt19937_64 eng_;
};

}  // namespace mimodos
