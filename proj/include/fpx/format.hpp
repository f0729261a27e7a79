#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fpx/error.hpp"

namespace fpx {

// Minifloat descriptor: 1 sign bit + E exponent bits + M mantissa bits,
// bias = 2^(E-1)-1. Every code is finite; the all-ones exponent is an
// ordinary value (no inf/NaN codes), so max magnitude = (2-2^-M)*2^(2^E-1-bias).
struct FpxFormat {
    int exp_bits = 3;
    int man_bits = 2;

    int total_bits() const { return 1 + exp_bits + man_bits; }
    int bias() const { return (1 << (exp_bits - 1)) - 1; }
    uint32_t code_count() const { return 1u << total_bits(); }
    uint32_t code_mask() const { return code_count() - 1; }
    uint32_t sign_mask() const { return 1u << (exp_bits + man_bits); }

    float max_representable() const;

    // Code spacing at magnitude |x| (x in representable range): 2^(e-M) with
    // e = floor(log2|x|) clamped to the subnormal exponent 1-bias.
    float ulp_at(double magnitude) const;

    std::string name() const;  // "e3m2"

    bool operator==(const FpxFormat&) const = default;

    static FpxFormat e3m2() { return {3, 2}; }
    static FpxFormat e2m3() { return {2, 3}; }
    static FpxFormat e2m2() { return {2, 2}; }
    static FpxFormat e2m1() { return {2, 1}; }

    // Validating constructor; throws InvalidFormat unless E in 1..5,
    // M in 0..6 and total bits in 3..8.
    static FpxFormat make(int exp_bits, int man_bits);
    static std::optional<FpxFormat> parse(std::string_view name);
};

// Ordered segment widths, most-significant bits first, summing to
// total_bits. Widths are 1, 2 or 4 so that 32-bit words hold a whole
// number of segments. FP6 preset is [2,4] (the 2+4 split).
struct SplitScheme {
    std::vector<int> widths;

    int total() const;
    size_t segment_count() const { return widths.size(); }
    bool operator==(const SplitScheme&) const = default;

    static SplitScheme for_format(const FpxFormat& fmt);
    static SplitScheme make(std::vector<int> widths, const FpxFormat& fmt);
};

}  // namespace fpx
