#pragma once

#include <cstdint>

// Software IEEE-754 binary16. Values travel as raw 16-bit patterns so the
// behavior is identical on hosts without native half support. Arithmetic is
// defined as: convert to fp32 (exact), operate in fp32, round back to fp16
// with round-to-nearest-even. Subnormals and signed zero are preserved.

namespace fpx {

float half_to_float(uint16_t h);
uint16_t float_to_half(float f);

// a * b under the fp16 contract above.
uint16_t half_mul(uint16_t a, uint16_t b);

constexpr bool half_is_finite(uint16_t h) { return (h & 0x7c00u) != 0x7c00u; }
constexpr bool half_is_nan(uint16_t h) {
    return (h & 0x7c00u) == 0x7c00u && (h & 0x03ffu) != 0;
}

}  // namespace fpx
