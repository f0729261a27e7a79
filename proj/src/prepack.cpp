#include "fpx/prepack.hpp"

#include <cstring>

#include "fpx/half.hpp"
#include "fpx/parallel.hpp"

namespace fpx {

namespace {

// Byte lane receiving code j of each group of four consecutive codes.
// Frozen permutation: with the runtime's extraction masks, the two halves
// of the first output register come from byte lanes 1 (low) and 3 (high),
// the second from lanes 0 (low) and 2 (high). Assigning codes 0..3 to
// lanes 1,3,0,2 therefore yields pairs back in gather order.
constexpr uint32_t kByteLaneOfCode[4] = {1, 3, 0, 2};

void check_tile_index(const QuantizedMatrix& q, uint32_t tile_row,
                      uint32_t tile_col) {
    if (tile_row >= q.rows / kTileDim || tile_col >= q.cols / kTileDim)
        throw Error(ErrorCode::IndexOutOfRange,
                    "tile (" + std::to_string(tile_row) + "," +
                        std::to_string(tile_col) + ") outside grid");
}

}  // namespace

std::pair<uint32_t, uint32_t> fragment_coords(uint32_t slice, uint32_t chunk,
                                              uint32_t thread, uint32_t pair,
                                              uint32_t lane) {
    if (slice >= kSlicesPerTile || chunk >= kChunksPerSlice ||
        thread >= kWarpSize || pair >= kPairsPerChunk || lane >= 2)
        throw Error(ErrorCode::IndexOutOfRange, "fragment index out of range");
    const uint32_t row = 16 * chunk + 8 * (pair & 1) + thread / 4;
    const uint32_t col = 16 * slice + 8 * (pair >> 1) + 2 * (thread % 4) + lane;
    return {row, col};
}

WarpCodes gather_per_thread(const QuantizedMatrix& q, uint32_t tile_row,
                            uint32_t tile_col) {
    check_tile_index(q, tile_row, tile_col);
    const uint32_t row0 = tile_row * kTileDim;
    const uint32_t col0 = tile_col * kTileDim;

    WarpCodes out{};
    for (uint32_t t = 0; t < kWarpSize; ++t) {
        uint32_t idx = 0;
        for (uint32_t s = 0; s < kSlicesPerTile; ++s)
            for (uint32_t c = 0; c < kChunksPerSlice; ++c)
                for (uint32_t p = 0; p < kPairsPerChunk; ++p)
                    for (uint32_t l = 0; l < 2; ++l) {
                        const auto [r, k] = fragment_coords(s, c, t, p, l);
                        out[t][idx++] = q.code_at(row0 + r, col0 + k);
                    }
    }
    return out;
}

std::vector<std::vector<uint32_t>> split_and_reorder(
    const std::array<uint8_t, kCodesPerThread>& thread_codes,
    const FpxFormat& fmt, const SplitScheme& split) {
    if (split.total() != fmt.total_bits())
        throw Error(ErrorCode::UnsupportedSplit,
                    "split widths do not cover " + fmt.name());

    std::vector<std::vector<uint32_t>> words(split.segment_count());
    for (size_t seg = 0; seg < split.segment_count(); ++seg)
        words[seg].assign(kCodesPerThread * split.widths[seg] / 32, 0);

    for (uint32_t k = 0; k < kCodesPerThread; ++k) {
        const uint32_t iter = k / 4;
        const uint32_t byte_lane = kByteLaneOfCode[k % 4];
        int low_shift = fmt.total_bits();
        for (size_t seg = 0; seg < split.segment_count(); ++seg) {
            const int w = split.widths[seg];
            low_shift -= w;
            const uint32_t value =
                (uint32_t(thread_codes[k]) >> low_shift) & ((1u << w) - 1);
            const uint32_t groups_per_word = 8 / w;
            const uint32_t word = iter / groups_per_word;
            const uint32_t group = iter % groups_per_word;
            const uint32_t shift = 8 * byte_lane + 8 - w * (group + 1);
            words[seg][word] |= value << shift;
        }
    }
    return words;
}

std::array<uint8_t, kCodesPerThread> unsplit_words(
    const std::vector<std::vector<uint32_t>>& segment_words,
    const FpxFormat& fmt, const SplitScheme& split) {
    std::array<uint8_t, kCodesPerThread> codes{};
    for (uint32_t k = 0; k < kCodesPerThread; ++k) {
        const uint32_t iter = k / 4;
        const uint32_t byte_lane = kByteLaneOfCode[k % 4];
        int low_shift = fmt.total_bits();
        uint32_t code = 0;
        for (size_t seg = 0; seg < split.segment_count(); ++seg) {
            const int w = split.widths[seg];
            low_shift -= w;
            const uint32_t groups_per_word = 8 / w;
            const uint32_t word = iter / groups_per_word;
            const uint32_t group = iter % groups_per_word;
            const uint32_t shift = 8 * byte_lane + 8 - w * (group + 1);
            const uint32_t value =
                (segment_words[seg][word] >> shift) & ((1u << w) - 1);
            code |= value << low_shift;
        }
        codes[k] = static_cast<uint8_t>(code);
    }
    return codes;
}

std::vector<uint8_t> assemble_warp(
    const std::array<std::vector<uint32_t>, kWarpSize>& per_thread_words) {
    const size_t n = per_thread_words[0].size();
    for (const auto& words : per_thread_words)
        if (words.size() != n)
            throw Error(ErrorCode::RaggedInput,
                        "threads contribute unequal word counts");

    std::vector<uint8_t> stream(n * kWarpSize * 4);
    for (size_t j = 0; j < n; ++j)
        for (uint32_t i = 0; i < kWarpSize; ++i) {
            const uint32_t w = per_thread_words[i][j];
            uint8_t* out = stream.data() + (j * kWarpSize + i) * 4;
            out[0] = uint8_t(w);
            out[1] = uint8_t(w >> 8);
            out[2] = uint8_t(w >> 16);
            out[3] = uint8_t(w >> 24);
        }
    return stream;
}

std::array<std::vector<uint32_t>, kWarpSize> disassemble_warp(
    const std::vector<uint8_t>& stream) {
    if (stream.size() % (kWarpSize * 4) != 0)
        throw Error(ErrorCode::RaggedInput,
                    "stream is not a whole number of warp-wide word rows");
    const size_t n = stream.size() / (kWarpSize * 4);
    std::array<std::vector<uint32_t>, kWarpSize> words;
    for (auto& v : words) v.resize(n);
    for (size_t j = 0; j < n; ++j)
        for (uint32_t i = 0; i < kWarpSize; ++i) {
            const uint8_t* in = stream.data() + (j * kWarpSize + i) * 4;
            words[i][j] = uint32_t(in[0]) | uint32_t(in[1]) << 8 |
                          uint32_t(in[2]) << 16 | uint32_t(in[3]) << 24;
        }
    return words;
}

PackedWeights pack(const QuantizedMatrix& q) {
    return pack(q, SplitScheme::for_format(q.format));
}

PackedWeights pack(const QuantizedMatrix& q, const SplitScheme& split) {
    if (q.rows == 0 || q.cols == 0 || q.rows % kTileDim || q.cols % kTileDim)
        throw Error(ErrorCode::ShapeMismatch,
                    "matrix dims must be padded to multiples of 64 at "
                    "quantize time before packing");
    if (split.total() != q.format.total_bits())
        throw Error(ErrorCode::UnsupportedSplit,
                    "split widths do not cover " + q.format.name());
    for (uint16_t s : q.scales)
        if (!half_is_finite(effective_scale(s, q.format)))
            throw Error(ErrorCode::ScaleOverflow,
                        "effective scale overflows fp16");

    PackedWeights p;
    p.format = q.format;
    p.split = split;
    p.rows = q.rows;
    p.cols = q.cols;
    p.orig_rows = q.orig_rows ? q.orig_rows : q.rows;
    p.orig_cols = q.orig_cols ? q.orig_cols : q.cols;
    p.scales = q.scales;

    const uint32_t grid_rows = p.tile_rows();
    const uint32_t grid_cols = p.tile_cols();
    const size_t tiles = size_t(grid_rows) * grid_cols;

    p.streams.resize(split.segment_count());
    for (size_t seg = 0; seg < split.segment_count(); ++seg)
        p.streams[seg].resize(tiles *
                              PackedWeights::tile_stream_bytes(split.widths[seg]));

    parallel_for_blocks(tiles, [&](size_t begin, size_t end) {
        for (size_t tile = begin; tile < end; ++tile) {
            const uint32_t tr = uint32_t(tile / grid_cols);
            const uint32_t tc = uint32_t(tile % grid_cols);
            const WarpCodes codes = gather_per_thread(q, tr, tc);

            std::array<std::vector<std::vector<uint32_t>>, kWarpSize> split_words;
            for (uint32_t t = 0; t < kWarpSize; ++t)
                split_words[t] = split_and_reorder(codes[t], q.format, split);

            for (size_t seg = 0; seg < split.segment_count(); ++seg) {
                std::array<std::vector<uint32_t>, kWarpSize> seg_words;
                for (uint32_t t = 0; t < kWarpSize; ++t)
                    seg_words[t] = std::move(split_words[t][seg]);
                const std::vector<uint8_t> block = assemble_warp(seg_words);
                std::memcpy(p.streams[seg].data() + tile * block.size(),
                            block.data(), block.size());
            }
        }
    });
    return p;
}

QuantizedMatrix unpack(const PackedWeights& p) {
    QuantizedMatrix q;
    q.format = p.format;
    q.rows = p.rows;
    q.cols = p.cols;
    q.orig_rows = p.orig_rows;
    q.orig_cols = p.orig_cols;
    q.scales = p.scales;
    q.codes.assign(size_t(p.rows) * p.cols, 0);

    const uint32_t grid_cols = p.tile_cols();
    const size_t tiles = size_t(p.tile_rows()) * grid_cols;

    parallel_for_blocks(tiles, [&](size_t begin, size_t end) {
        for (size_t tile = begin; tile < end; ++tile) {
            const uint32_t tr = uint32_t(tile / grid_cols);
            const uint32_t tc = uint32_t(tile % grid_cols);

            // Re-split each thread's words from the per-tile stream blocks.
            std::array<std::vector<std::vector<uint32_t>>, kWarpSize> split_words;
            for (size_t seg = 0; seg < p.split.segment_count(); ++seg) {
                const size_t block_bytes =
                    PackedWeights::tile_stream_bytes(p.split.widths[seg]);
                std::vector<uint8_t> block(
                    p.streams[seg].begin() + tile * block_bytes,
                    p.streams[seg].begin() + (tile + 1) * block_bytes);
                auto seg_words = disassemble_warp(block);
                for (uint32_t t = 0; t < kWarpSize; ++t) {
                    if (split_words[t].empty())
                        split_words[t].resize(p.split.segment_count());
                    split_words[t][seg] = std::move(seg_words[t]);
                }
            }

            for (uint32_t t = 0; t < kWarpSize; ++t) {
                const auto codes = unsplit_words(split_words[t], p.format, p.split);
                uint32_t idx = 0;
                for (uint32_t s = 0; s < kSlicesPerTile; ++s)
                    for (uint32_t c = 0; c < kChunksPerSlice; ++c)
                        for (uint32_t pr = 0; pr < kPairsPerChunk; ++pr)
                            for (uint32_t l = 0; l < 2; ++l) {
                                const auto [r, k] = fragment_coords(s, c, t, pr, l);
                                q.codes[size_t(tr * kTileDim + r) * q.cols +
                                        (tc * kTileDim + k)] = codes[idx++];
                            }
            }
        }
    });
    return q;
}

}  // namespace fpx
