#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "fpx/codec.hpp"
#include "fpx/format.hpp"

namespace fpx {

// Warp-level tiling constants. A 64x64 weight tile is split along k into
// four 64x16 slices, each slice into four 16x16 chunks, and each chunk is
// consumed by 32 threads holding four element pairs each.
inline constexpr uint32_t kTileDim = 64;
inline constexpr uint32_t kSlicesPerTile = 4;
inline constexpr uint32_t kChunksPerSlice = 4;
inline constexpr uint32_t kPairsPerChunk = 4;
inline constexpr uint32_t kWarpSize = 32;
inline constexpr uint32_t kCodesPerThread = 128;  // per 64x64 tile
inline constexpr uint32_t kCodesPerThreadSlice = 32;

// Position of one fragment element inside its 64x64 tile.
// Pairs visit the four 8x8 quadrants of a 16x16 chunk in the order
// (row-quadrant, col-quadrant) = (0,0),(1,0),(0,1),(1,1); inside a quadrant
// thread t holds the element pair at row t/4, cols 2*(t%4) and 2*(t%4)+1.
std::pair<uint32_t, uint32_t> fragment_coords(uint32_t slice, uint32_t chunk,
                                              uint32_t thread, uint32_t pair,
                                              uint32_t lane);

// Codes consumed by each of the 32 threads for one tile, in consumption
// order: slice-major, then chunk, then pair, then lane.
using WarpCodes = std::array<std::array<uint8_t, kCodesPerThread>, kWarpSize>;
WarpCodes gather_per_thread(const QuantizedMatrix& q, uint32_t tile_row,
                            uint32_t tile_col);

// One thread's 128 codes split into per-segment 32-bit word streams.
// For the FP6 [2,4] split: 8 words of 2-bit segments + 16 words of 4-bit
// segments. Word bit layout matches the runtime mask-and-shift sequence:
// a width-w word carries 8/w groups of 4 segments (one per byte lane),
// group g at bits [7-w*g : 8-w*(g+1)] of each byte; within a group of four
// consecutive codes, code j lands in byte lane {1,3,0,2}[j].
std::vector<std::vector<uint32_t>> split_and_reorder(
    const std::array<uint8_t, kCodesPerThread>& thread_codes,
    const FpxFormat& fmt, const SplitScheme& split);

// Inverse of split_and_reorder (inspection/testing path).
std::array<uint8_t, kCodesPerThread> unsplit_words(
    const std::vector<std::vector<uint32_t>>& segment_words,
    const FpxFormat& fmt, const SplitScheme& split);

// Jagged warp assembly: output word j*32+i is word j of thread i,
// serialized little-endian. All threads must contribute equally many words.
std::vector<uint8_t> assemble_warp(
    const std::array<std::vector<uint32_t>, kWarpSize>& per_thread_words);

// Inverse interleave of assemble_warp.
std::array<std::vector<uint32_t>, kWarpSize> disassemble_warp(
    const std::vector<uint8_t>& stream);

// Pre-packed weights: one byte stream per segment width (tiles in row-major
// tile order, 512*w bytes per tile, so every tile offset is 128-byte
// aligned) plus per-row fp16 scales.
struct PackedWeights {
    FpxFormat format;
    SplitScheme split;
    uint32_t rows = 0;  // padded
    uint32_t cols = 0;  // padded
    uint32_t orig_rows = 0;
    uint32_t orig_cols = 0;
    std::vector<std::vector<uint8_t>> streams;  // one per segment
    std::vector<uint16_t> scales;

    uint32_t tile_rows() const { return rows / kTileDim; }
    uint32_t tile_cols() const { return cols / kTileDim; }
    // Byte size of one tile's block in the stream of segment width w.
    static size_t tile_stream_bytes(int w) { return size_t(512) * w; }

    bool operator==(const PackedWeights&) const = default;
};

// Ahead-of-time packing: gather -> split/reorder -> jagged assembly, per
// tile per segment stream. unpack() is the exact inverse.
PackedWeights pack(const QuantizedMatrix& q);
PackedWeights pack(const QuantizedMatrix& q, const SplitScheme& split);
QuantizedMatrix unpack(const PackedWeights& p);

}  // namespace fpx
