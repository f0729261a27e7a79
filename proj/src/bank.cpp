#include "fpx/bank.hpp"

#include <bitset>

namespace fpx {

int bank_conflicts(const WarpAddresses& addrs) {
    std::bitset<kBankCount> banks;
    for (uint64_t a : addrs) banks.set((a / 4) % kBankCount);
    return int(kWarpSize) - int(banks.count());
}

std::vector<int> conflict_counts(const BankAccessTrace& trace) {
    std::vector<int> out;
    out.reserve(trace.steps.size());
    for (const auto& step : trace.steps) out.push_back(bank_conflicts(step));
    return out;
}

std::vector<int> bank_conflict_report(const PackedWeights& p) {
    std::vector<int> out;
    const size_t tiles = size_t(p.tile_rows()) * p.tile_cols();
    for (size_t tile = 0; tile < tiles; ++tile) {
        for (uint32_t s = 0; s < kSlicesPerTile; ++s) {
            for (size_t seg = 0; seg < p.split.segment_count(); ++seg) {
                const int w = p.split.widths[seg];
                const uint64_t tile_base_words = uint64_t(tile) * 128 * w;
                // Slice s occupies per-thread words [w*s, w*s + w).
                for (int j = w * int(s); j < w * int(s + 1); ++j) {
                    WarpAddresses addrs;
                    for (uint32_t t = 0; t < kWarpSize; ++t)
                        addrs[t] =
                            (tile_base_words + uint64_t(j) * kWarpSize + t) * 4;
                    out.push_back(bank_conflicts(addrs));
                }
            }
        }
    }
    return out;
}

WarpAddresses broadcast_addresses(uint64_t word_index) {
    WarpAddresses a;
    a.fill(word_index * 4);
    return a;
}

WarpAddresses strided_addresses(uint64_t stride_words) {
    WarpAddresses a;
    for (uint32_t t = 0; t < kWarpSize; ++t) a[t] = uint64_t(t) * stride_words * 4;
    return a;
}

}  // namespace fpx
