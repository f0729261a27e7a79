#pragma once

#include <array>
#include <cstdint>

#include "fpx/format.hpp"
#include "fpx/prepack.hpp"

namespace fpx {

// Word-parallel FP6 (e3m2, 2+4 split) runtime. Each 32-bit word is treated
// as four independent byte lanes; the constants below are load-bearing and
// guarded by unit tests against drift.
inline constexpr uint32_t kStitchHighMask = 0xc0c0c0c0u;  // 2-bit segments
inline constexpr uint32_t kStitchLowMask = 0xf0f0f0f0u;   // 4-bit segments
inline constexpr int kStitchShift = 2;
inline constexpr uint32_t kSignMask4 = 0x80808080u;
inline constexpr uint32_t kExpManMask4 = 0x1f1f1f1fu;
inline constexpr int kDequantShift = 2;
inline constexpr uint32_t kHighPairMask = 0x9f009f00u;
inline constexpr uint32_t kLowPairMask = 0x009f009fu;
inline constexpr int kPairShift = 8;

// Reconstructs four 6-bit codes at bits [7:2] of each byte lane from one
// word of 2-bit segments and one word of 4-bit segments.
constexpr uint32_t stitch_step(uint32_t r_frag1, uint32_t r_frag2) {
    return (r_frag1 & kStitchHighMask) |
           ((r_frag2 & kStitchLowMask) >> kStitchShift);
}

// Two fp16 patterns per word: r1 holds the pair from byte lanes 3/1,
// r2 the pair from byte lanes 2/0, each in the top byte of its half
// (sign copied, exponent bits copied unchanged, top mantissa bits copied,
// rest zero).
struct DequantPair {
    uint32_t r1;
    uint32_t r2;
};

constexpr DequantPair dequant4(uint32_t stitched) {
    const uint32_t sign = stitched & kSignMask4;
    const uint32_t body = (stitched >> kDequantShift) & kExpManMask4;
    const uint32_t v = sign | body;
    return {v & kHighPairMask, (v & kLowPairMask) << kPairShift};
}

// Multiplies both fp16 halves of a word by one fp16 scale (RNE semantics).
uint32_t mul_half2(uint32_t pair, uint16_t scale);

// Per-thread state for de-quantizing one 64x16 slice: 32 codes in as
// 2+4-bit segment words, 32 fp16 patterns out in consumption order.
// Scales are effective per-row scales ordered to match output pairs
// (two entries per chunk: row-quadrant 0 then 1).
struct ThreadSliceInput {
    std::array<uint32_t, 2> frag1;
    std::array<uint32_t, 4> frag2;
    std::array<uint16_t, 8> scales;
};

struct WarpSliceState {
    std::array<ThreadSliceInput, kWarpSize> threads;
    std::array<std::array<uint16_t, kCodesPerThreadSlice>, kWarpSize> out{};
};

// The 8-iteration stitch/dequant/scale loop for one thread. Registers
// advance exactly as the runtime does: frag1 shifts left 2 between groups
// and steps every 4th iteration, frag2 shifts left 4 and steps every 2nd.
std::array<uint16_t, kCodesPerThreadSlice> dequant_thread_slice(
    const ThreadSliceInput& in);

// All 32 threads of a slice (threads are independent).
void dequant_slice(WarpSliceState& state);

// True if fmt/split are served by the word-parallel path above
// (FP6 e3m2 with the [2,4] split); other formats use the scalar fallback.
bool word_parallel_supported(const FpxFormat& fmt, const SplitScheme& split);

}  // namespace fpx
