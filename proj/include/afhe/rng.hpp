#pragma once

#include <cstdint>

namespace afhe::rng {

// Counter-based generator built from the splitmix64 finalizer. Draws are a
// pure function of (seed, stream, counter), so disjoint index ranges can be
// generated in parallel and still reproduce the sequential stream
// bit-for-bit, on any platform with 64-bit wrap-around arithmetic.
inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x ^= x >> 30;
  x *= 0xBF58476D1CE4E5B9ull;
  x ^= x >> 27;
  x *= 0x94D049BB133111EBull;
  x ^= x >> 31;
  return x;
}

constexpr std::uint64_t draw_u64(std::uint64_t seed, std::uint64_t stream,
                                 std::uint64_t counter) noexcept {
  std::uint64_t x = mix64(seed + kGolden * (stream + 1));
  return mix64(x + kGolden * (counter + 1));
}

// Uniform in [0,1), 53-bit resolution.
constexpr double unit(std::uint64_t bits) noexcept {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

// Uniform in (0,1]; safe as a logarithm argument.
constexpr double unit_pos(std::uint64_t bits) noexcept {
  return static_cast<double>((bits >> 11) + 1) * 0x1.0p-53;
}

// Standard normal via Box-Muller; consumes counters 2*index and 2*index+1
// of the given stream.
double normal(std::uint64_t seed, std::uint64_t stream,
              std::uint64_t index) noexcept;

}  // namespace afhe::rng
