#include "fpx/gemm.hpp"

#include <algorithm>
#include <vector>

#include "fpx/half.hpp"
#include "fpx/parallel.hpp"
#include "fpx/simt.hpp"

namespace fpx {

namespace {

// B element with zero padding beyond the stored activation shape (col-major).
inline uint16_t b_at(const ScalarMatrix& b, uint32_t k, uint32_t j) {
    if (k >= b.rows || j >= b.cols) return 0;
    return b.f16[size_t(j) * b.rows + k];
}

void check_problem(uint32_t a_cols, uint32_t a_orig_cols, const ScalarMatrix& b) {
    if (b.dtype != Dtype::Fp16 || b.layout != Layout::ColMajor)
        throw Error(ErrorCode::ShapeMismatch,
                    "activations must be fp16 col-major");
    if (b.rows != a_cols && b.rows != a_orig_cols)
        throw Error(ErrorCode::ShapeMismatch,
                    "weight cols " + std::to_string(a_cols) + " (orig " +
                        std::to_string(a_orig_cols) +
                        ") do not match activation rows " +
                        std::to_string(b.rows));
}

// Per-thread words of one tile, one segment: word j lives at stream word
// index tile*128*w + j*32 + t (the jagged order).
uint32_t load_word(const std::vector<uint8_t>& stream, size_t tile, int w,
                   uint32_t j, uint32_t t) {
    const size_t word_idx = size_t(tile) * 128 * w + size_t(j) * kWarpSize + t;
    const uint8_t* s = stream.data() + word_idx * 4;
    return uint32_t(s[0]) | uint32_t(s[1]) << 8 | uint32_t(s[2]) << 16 |
           uint32_t(s[3]) << 24;
}

void record_slice_loads(const PackedWeights& p, size_t tile, uint32_t slice,
                        BankAccessTrace& trace) {
    for (size_t seg = 0; seg < p.split.segment_count(); ++seg) {
        const int w = p.split.widths[seg];
        const uint64_t tile_base_words = uint64_t(tile) * 128 * w;
        for (int j = w * int(slice); j < w * int(slice + 1); ++j) {
            WarpAddresses addrs;
            for (uint32_t t = 0; t < kWarpSize; ++t)
                addrs[t] = (tile_base_words + uint64_t(j) * kWarpSize + t) * 4;
            trace.steps.push_back(addrs);
        }
    }
}

// fp16 outputs of one (tile, slice), out[thread][k] in consumption order.
using SliceOut = std::array<std::array<uint16_t, kCodesPerThreadSlice>, kWarpSize>;

// Tile-relative row of slice-output index k for thread t: chunk k/8,
// row-quadrant from the pair index, thread row t/4.
inline uint32_t slice_out_row(uint32_t k, uint32_t t) {
    const uint32_t chunk = k / 8;
    const uint32_t pair = (k % 8) / 2;
    return 16 * chunk + 8 * (pair & 1) + t / 4;
}

SliceOut dequant_tile_slice_words(const PackedWeights& p, size_t tile,
                                  uint32_t tile_row, uint32_t slice,
                                  const std::vector<uint16_t>& eff_scales) {
    WarpSliceState state;
    for (uint32_t t = 0; t < kWarpSize; ++t) {
        auto& in = state.threads[t];
        for (uint32_t j = 0; j < 2; ++j)
            in.frag1[j] = load_word(p.streams[0], tile, 2, 2 * slice + j, t);
        for (uint32_t j = 0; j < 4; ++j)
            in.frag2[j] = load_word(p.streams[1], tile, 4, 4 * slice + j, t);
        for (uint32_t c = 0; c < kChunksPerSlice; ++c) {
            in.scales[2 * c] = eff_scales[tile_row * kTileDim + 16 * c + t / 4];
            in.scales[2 * c + 1] =
                eff_scales[tile_row * kTileDim + 16 * c + 8 + t / 4];
        }
    }
    dequant_slice(state);
    return state.out;
}

// Scalar fallback for formats without the word-parallel kernel: recover the
// codes from the packed words and apply the reference fp16 semantics.
SliceOut dequant_tile_slice_scalar(const PackedWeights& p,
                                   const WarpCodes& tile_codes,
                                   uint32_t tile_row, uint32_t slice) {
    SliceOut out{};
    for (uint32_t t = 0; t < kWarpSize; ++t)
        for (uint32_t k = 0; k < kCodesPerThreadSlice; ++k) {
            const uint8_t code = tile_codes[t][slice * kCodesPerThreadSlice + k];
            const uint16_t h = float_to_half(decode_scalar(code, p.format));
            const uint32_t row = tile_row * kTileDim + slice_out_row(k, t);
            out[t][k] = half_mul(h, p.scales[row]);
        }
    return out;
}

WarpCodes recover_tile_codes(const PackedWeights& p, size_t tile) {
    WarpCodes codes{};
    for (uint32_t t = 0; t < kWarpSize; ++t) {
        std::vector<std::vector<uint32_t>> words(p.split.segment_count());
        for (size_t seg = 0; seg < p.split.segment_count(); ++seg) {
            const int w = p.split.widths[seg];
            words[seg].resize(4 * w);
            for (uint32_t j = 0; j < uint32_t(4 * w); ++j)
                words[seg][j] = load_word(p.streams[seg], tile, w, j, t);
        }
        codes[t] = unsplit_words(words, p.format, p.split);
    }
    return codes;
}

// A-fragment of one 16x16 chunk rebuilt from slice outputs.
AFrag chunk_fragment(const SliceOut& out, uint32_t chunk) {
    AFrag af{};
    for (uint32_t t = 0; t < kWarpSize; ++t)
        for (uint32_t pr = 0; pr < kPairsPerChunk; ++pr)
            for (uint32_t l = 0; l < 2; ++l) {
                const uint32_t row = 8 * (pr & 1) + t / 4;
                const uint32_t col = 8 * (pr >> 1) + 2 * (t % 4) + l;
                af[row][col] = out[t][8 * chunk + 2 * pr + l];
            }
    return af;
}

BFrag b_fragment(const ScalarMatrix& b, uint32_t k0, uint32_t n0) {
    BFrag bf{};
    for (uint32_t k = 0; k < 16; ++k)
        for (uint32_t j = 0; j < 8; ++j) bf[k][j] = b_at(b, k0 + k, n0 + j);
    return bf;
}

void accumulate_block(ScalarMatrix& c, const AFrag& af, const BFrag& bf,
                      uint32_t row0, uint32_t n0) {
    CFrag cf{};
    const uint32_t m = c.rows;
    const uint32_t jmax = std::min(8u, c.cols - n0);
    for (uint32_t i = 0; i < 16; ++i)
        for (uint32_t j = 0; j < jmax; ++j)
            cf[i][j] = c.f32[size_t(n0 + j) * m + row0 + i];
    mma_emulate(af, bf, cf);
    for (uint32_t i = 0; i < 16; ++i)
        for (uint32_t j = 0; j < jmax; ++j)
            c.f32[size_t(n0 + j) * m + row0 + i] = cf[i][j];
}

}  // namespace

void mma_emulate(const AFrag& a, const BFrag& b, CFrag& c) {
    float af[16][16];
    float bf[16][8];
    for (int i = 0; i < 16; ++i)
        for (int k = 0; k < 16; ++k) af[i][k] = half_to_float(a[i][k]);
    for (int k = 0; k < 16; ++k)
        for (int j = 0; j < 8; ++j) bf[k][j] = half_to_float(b[k][j]);

    for (int i = 0; i < 16; ++i)
        for (int j = 0; j < 8; ++j) {
            float acc = c[i][j];
            for (int k = 0; k < 16; ++k) acc += af[i][k] * bf[k][j];
            c[i][j] = acc;
        }
}

ScalarMatrix gemm_packed(const PackedWeights& a, const ScalarMatrix& b,
                         BankAccessTrace* trace) {
    check_problem(a.cols, a.orig_cols, b);
    const uint32_t n = b.cols;
    ScalarMatrix c = ScalarMatrix::zeros(Dtype::Fp32, Layout::ColMajor, a.rows, n);

    std::vector<uint16_t> eff_scales;
    const bool word_path = word_parallel_supported(a.format, a.split);
    if (word_path) {
        eff_scales.resize(a.scales.size());
        for (size_t r = 0; r < a.scales.size(); ++r)
            eff_scales[r] = effective_scale(a.scales[r], a.format);
    }

    const uint32_t grid_cols = a.tile_cols();
    auto process_tile_row = [&](uint32_t tr) {
        for (uint32_t tc = 0; tc < grid_cols; ++tc) {
            const size_t tile = size_t(tr) * grid_cols + tc;
            WarpCodes tile_codes;
            if (!word_path) tile_codes = recover_tile_codes(a, tile);

            for (uint32_t s = 0; s < kSlicesPerTile; ++s) {
                if (trace) record_slice_loads(a, tile, s, *trace);
                const SliceOut out =
                    word_path
                        ? dequant_tile_slice_words(a, tile, tr, s, eff_scales)
                        : dequant_tile_slice_scalar(a, tile_codes, tr, s);

                for (uint32_t ch = 0; ch < kChunksPerSlice; ++ch) {
                    const AFrag af = chunk_fragment(out, ch);
                    for (uint32_t n0 = 0; n0 < n; n0 += 8) {
                        const BFrag bf = b_fragment(b, tc * kTileDim + 16 * s, n0);
                        accumulate_block(c, af, bf, tr * kTileDim + 16 * ch, n0);
                    }
                }
            }
        }
    };

    if (trace) {
        // Keep the recorded load order deterministic.
        for (uint32_t tr = 0; tr < a.tile_rows(); ++tr) process_tile_row(tr);
    } else {
        parallel_for_blocks(a.tile_rows(), [&](size_t begin, size_t end) {
            for (size_t tr = begin; tr < end; ++tr)
                process_tile_row(uint32_t(tr));
        });
    }
    return c;
}

ScalarMatrix gemm_reference(const QuantizedMatrix& q, const ScalarMatrix& b) {
    check_problem(q.cols, q.orig_cols, b);
    const ScalarMatrix w = dequantize_reference(q);
    const uint32_t n = b.cols;
    ScalarMatrix c = ScalarMatrix::zeros(Dtype::Fp32, Layout::ColMajor, q.rows, n);

    const uint32_t grid_rows = q.rows / kTileDim;
    const uint32_t grid_cols = q.cols / kTileDim;
    parallel_for_blocks(grid_rows, [&](size_t begin, size_t end) {
        for (size_t tr = begin; tr < end; ++tr) {
            for (uint32_t tc = 0; tc < grid_cols; ++tc)
                for (uint32_t s = 0; s < kSlicesPerTile; ++s)
                    for (uint32_t ch = 0; ch < kChunksPerSlice; ++ch) {
                        AFrag af{};
                        for (uint32_t i = 0; i < 16; ++i)
                            for (uint32_t k = 0; k < 16; ++k)
                                af[i][k] =
                                    w.f16[size_t(tr * kTileDim + 16 * ch + i) *
                                              w.cols +
                                          tc * kTileDim + 16 * s + k];
                        for (uint32_t n0 = 0; n0 < n; n0 += 8) {
                            const BFrag bf =
                                b_fragment(b, tc * kTileDim + 16 * s, n0);
                            accumulate_block(c, af, bf,
                                             uint32_t(tr) * kTileDim + 16 * ch,
                                             n0);
                        }
                    }
        }
    });
    return c;
}

}  // namespace fpx
