#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "fpx/prepack.hpp"

namespace fpx {

inline constexpr uint32_t kBankCount = 32;

// One shared-memory load step: the 32 byte addresses issued by a warp.
using WarpAddresses = std::array<uint64_t, kWarpSize>;

struct BankAccessTrace {
    std::vector<WarpAddresses> steps;
};

// Conflicts in one step: threads minus distinct banks, bank = (addr/4) % 32.
int bank_conflicts(const WarpAddresses& addrs);

std::vector<int> conflict_counts(const BankAccessTrace& trace);

// Simulates the per-slice word loads of every tile from the jagged layout
// and reports the conflict count of each load step. The shipped layout is
// conflict-free: at step j every thread i reads stream word j*32+i.
std::vector<int> bank_conflict_report(const PackedWeights& p);

// Address generators for detector controls (not used by the real layout).
WarpAddresses broadcast_addresses(uint64_t word_index);      // all same word
WarpAddresses strided_addresses(uint64_t stride_words);      // t -> t*stride

}  // namespace fpx
