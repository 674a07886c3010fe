#include "afhe/rng.hpp"

#include <cmath>
#include <numbers>

namespace afhe::rng {

double normal(std::uint64_t seed, std::uint64_t stream,
              std::uint64_t index) noexcept {
  const double u1 = unit_pos(draw_u64(seed, stream, 2 * index));
  const double u2 = unit(draw_u64(seed, stream, 2 * index + 1));
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace afhe::rng
