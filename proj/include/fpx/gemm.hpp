#pragma once

#include <array>
#include <cstdint>

#include "fpx/bank.hpp"
#include "fpx/codec.hpp"
#include "fpx/prepack.hpp"

namespace fpx {

// Emulated tensor-core fragment shapes (m16n8k16 column panels).
using AFrag = std::array<std::array<uint16_t, 16>, 16>;  // fp16 patterns
using BFrag = std::array<std::array<uint16_t, 8>, 16>;
using CFrag = std::array<std::array<float, 8>, 16>;

// c[i][j] += sum_k a[i][k]*b[k][j], products and sums in fp32, k ascending.
// This pins the simulator's tensor-core numerics.
void mma_emulate(const AFrag& a, const BFrag& b, CFrag& c);

// Packed-path GEMM: C = dequant(A) x B with A pre-packed (rows x cols_k)
// and B fp16 col-major (cols_k x n). Per tile and slice the packed words
// are loaded (optionally recording the bank access trace), de-quantized,
// and fed chunk-by-chunk to mma_emulate. Accumulation order per output
// element: k-tiles ascending, slices ascending, k within an mma ascending.
// Returns fp32 col-major (padded rows x n).
ScalarMatrix gemm_packed(const PackedWeights& a, const ScalarMatrix& b,
                         BankAccessTrace* trace = nullptr);

// Oracle: identical schedule via the scalar de-quantization path.
// Exact (bit-for-bit) equality with gemm_packed is the contract.
ScalarMatrix gemm_reference(const QuantizedMatrix& q, const ScalarMatrix& b);

}  // namespace fpx
