#include "fpx/simt.hpp"

#include "fpx/half.hpp"

namespace fpx {

uint32_t mul_half2(uint32_t pair, uint16_t scale) {
    const uint16_t lo = half_mul(uint16_t(pair & 0xffffu), scale);
    const uint16_t hi = half_mul(uint16_t(pair >> 16), scale);
    return uint32_t(lo) | (uint32_t(hi) << 16);
}

std::array<uint16_t, kCodesPerThreadSlice> dequant_thread_slice(
    const ThreadSliceInput& in) {
    std::array<uint32_t, 2> frag1 = in.frag1;
    std::array<uint32_t, 4> frag2 = in.frag2;
    uint32_t* f1 = frag1.data();
    uint32_t* f2 = frag2.data();

    std::array<uint16_t, kCodesPerThreadSlice> out{};
    for (int i = 0; i < 8; ++i) {
        const uint32_t stitched = stitch_step(*f1, *f2);

        // Advance to the next register or expose the next group.
        if (i % 4 == 3)
            ++f1;
        else
            *f1 <<= 2;
        if (i % 2 == 1)
            ++f2;
        else
            *f2 <<= 4;

        const DequantPair d = dequant4(stitched);
        const uint32_t r1 = mul_half2(d.r1, in.scales[i / 2 * 2]);
        const uint32_t r2 = mul_half2(d.r2, in.scales[i / 2 * 2 + 1]);

        out[i * 4 + 0] = uint16_t(r1 & 0xffffu);
        out[i * 4 + 1] = uint16_t(r1 >> 16);
        out[i * 4 + 2] = uint16_t(r2 & 0xffffu);
        out[i * 4 + 3] = uint16_t(r2 >> 16);
    }
    return out;
}

void dequant_slice(WarpSliceState& state) {
    for (uint32_t t = 0; t < kWarpSize; ++t)
        state.out[t] = dequant_thread_slice(state.threads[t]);
}

bool word_parallel_supported(const FpxFormat& fmt, const SplitScheme& split) {
    return fmt == FpxFormat::e3m2() && split.widths == std::vector<int>{2, 4};
}

}  // namespace fpx
