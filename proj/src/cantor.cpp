#include "ifsp/cantor.hpp"

#include <bit>
#include <cmath>
#include <cstdint>

namespace ifsp {
namespace {

using u128 = unsigned __int128;

constexpr int kDigits = 64;

// x in [0,1) as a base-2^64 fixed-point fraction. Multiplying by 2^64 is a
// pure exponent shift (exact); the integer conversion truncates whatever
// mantissa bits lie below 2^-64.
std::uint64_t to_fixed64(double v) {
  return static_cast<std::uint64_t>(v * 0x1p64);
}

}  // namespace

double cantor_cdf(double x) {
  if (!(x > 0.0)) return 0.0;
  if (x >= 1.0) return 1.0;

  std::uint64_t rem = to_fixed64(x);
  // Binary digits of the result, packed into a base-2^64 fraction so the
  // whole scan stays exact; one rounding happens at the final conversion.
  std::uint64_t bits = 0;
  for (int k = 1; k <= kDigits && rem != 0; ++k) {
    const u128 prod = static_cast<u128>(rem) * 3u;
    const int digit = static_cast<int>(prod >> 64);
    rem = static_cast<std::uint64_t>(prod);
    if (digit == 1) {
      bits |= std::uint64_t{1} << (64 - k);  // gap: terminal binary 1
      break;
    }
    if (digit == 2) bits |= std::uint64_t{1} << (64 - k);
  }
  return std::ldexp(static_cast<double>(bits), -64);
}

double cantor_quantile(double u) {
  if (!(u > 0.0)) return 0.0;
  if (u >= 1.0) return 1.0;

  // Greedy infimum walk. rem holds the remaining quantile mass scaled by
  // 2^64; it lives in [0, 2^64] (the value 2^64 means "exactly 1" and is an
  // absorbing digit-2 state), hence the 128-bit type.
  u128 rem = to_fixed64(u);
  constexpr u128 kOne = static_cast<u128>(1) << 64;
  constexpr u128 kHalf = static_cast<u128>(1) << 63;

  // Ternary digits (0 or 2), accumulated exactly as a numerator over 3^64.
  u128 num = 0;
  u128 scale = 1;
  for (int k = 0; k < kDigits; ++k) scale *= 3u;  // 3^64 < 2^102
  u128 cell = scale;
  for (int k = 0; k < kDigits && rem != 0; ++k) {
    cell /= 3u;
    if (rem > kHalf) {
      num += 2u * cell;  // right third
      rem = (rem << 1) - kOne;
    } else {
      rem <<= 1;  // left third; rem may reach exactly kOne (digit-2 tail)
    }
  }

  // num/scale in [0,1): binary long division to 64 result bits.
  std::uint64_t bits = 0;
  u128 r = num;
  for (int k = 1; k <= 64; ++k) {
    r <<= 1;
    if (r >= scale) {
      r -= scale;
      bits |= std::uint64_t{1} << (64 - k);
    }
  }
  // Truncate to 53 significant bits before converting so the implicit
  // integer-to-double rounding cannot round up past the true value.
  if (bits != 0) {
    const int msb = 63 - std::countl_zero(bits);
    if (msb >= 53) bits &= ~((std::uint64_t{1} << (msb - 52)) - 1);
  }
  return std::ldexp(static_cast<double>(bits), -64);
}

}  // namespace ifsp
