#include "fpx/half.hpp"

#include <bit>

namespace fpx {

float half_to_float(uint16_t h) {
    const uint32_t sign = static_cast<uint32_t>(h & 0x8000u) << 16;
    const uint32_t exp = (h >> 10) & 0x1fu;
    const uint32_t man = h & 0x03ffu;

    uint32_t bits;
    if (exp == 0) {
        if (man == 0) {
            bits = sign;  // +/-0
        } else {
            // Subnormal: value = man * 2^-24. Renormalize for fp32.
            const int top = 31 - std::countl_zero(man);  // 0..9
            bits = sign | (static_cast<uint32_t>(top + 103) << 23) |
                   ((man << (23 - top)) & 0x007fffffu);
        }
    } else if (exp == 31) {
        bits = sign | 0x7f800000u | (man << 13);  // inf / nan
    } else {
        bits = sign | ((exp + 112) << 23) | (man << 13);
    }
    return std::bit_cast<float>(bits);
}

uint16_t float_to_half(float f) {
    const uint32_t x = std::bit_cast<uint32_t>(f);
    const uint16_t sign = static_cast<uint16_t>((x >> 16) & 0x8000u);
    const uint32_t absx = x & 0x7fffffffu;

    if (absx >= 0x7f800000u) {  // inf or nan
        const uint32_t man = absx & 0x007fffffu;
        if (man == 0) return sign | 0x7c00u;
        return sign | 0x7e00u | static_cast<uint16_t>(man >> 13);
    }

    // Unbiased-for-fp16 exponent: fp32 field - 127 + 15.
    const int e = static_cast<int>(absx >> 23) - 112;
    const uint32_t man = absx & 0x007fffffu;

    if (e >= 31) return sign | 0x7c00u;  // overflow -> inf

    if (e >= 1) {
        // Normal result: drop 13 mantissa bits with RNE. A mantissa carry
        // rolls into the exponent field, which is the correct next value.
        uint16_t h = sign | static_cast<uint16_t>(e << 10) |
                     static_cast<uint16_t>(man >> 13);
        const uint32_t rem = man & 0x1fffu;
        if (rem > 0x1000u || (rem == 0x1000u && (h & 1))) h++;
        return h;
    }

    // Subnormal or zero result.
    if (e < -10) return sign;  // magnitude < 2^-25: rounds to +/-0
    const uint32_t sig = man | 0x00800000u;  // 24-bit significand, 1.man
    const int shift = 14 - e;                // 14..24
    uint16_t h = sign | static_cast<uint16_t>(sig >> shift);
    const uint32_t rem = sig & ((1u << shift) - 1);
    const uint32_t half_point = 1u << (shift - 1);
    if (rem > half_point || (rem == half_point && (h & 1))) h++;
    return h;
}

uint16_t half_mul(uint16_t a, uint16_t b) {
    return float_to_half(half_to_float(a) * half_to_float(b));
}

}  // namespace fpx
