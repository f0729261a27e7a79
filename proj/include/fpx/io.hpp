#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "fpx/codec.hpp"
#include "fpx/prepack.hpp"

namespace fpx {

// Binary containers, all multi-byte fields little-endian.
//
// Matrix file: magic "FPXMAT1\0", u32 dtype (0=fp32, 1=fp16), u32 rows,
// u32 cols, u8 layout (0=row-major, 1=col-major), 3 pad bytes, raw payload.
//
// Pack file: magic "FPXPACK1", u16 version=1, u8 exp_bits, u8 man_bits,
// u8 segment count, u8 widths (high bits first), u32 orig_rows, u32
// orig_cols, u32 padded_rows, u32 padded_cols, u32 tile_m=64, u32
// tile_k=64, u8 scale granularity (0=row-wise), scales (padded_rows x u16),
// then per-segment streams, each prefixed with a u64 byte length.

inline constexpr char kMatrixMagic[8] = {'F', 'P', 'X', 'M', 'A', 'T', '1', 0};
inline constexpr char kPackMagic[8] = {'F', 'P', 'X', 'P', 'A', 'C', 'K', '1'};
inline constexpr uint16_t kPackVersion = 1;

std::vector<uint8_t> serialize_matrix(const ScalarMatrix& m);
ScalarMatrix deserialize_matrix(const std::vector<uint8_t>& bytes);

std::vector<uint8_t> serialize_packed(const PackedWeights& p);
PackedWeights deserialize_packed(const std::vector<uint8_t>& bytes);

void write_matrix_file(const std::filesystem::path& path, const ScalarMatrix& m);
ScalarMatrix read_matrix_file(const std::filesystem::path& path);

void write_pack_file(const std::filesystem::path& path, const PackedWeights& p);
PackedWeights read_pack_file(const std::filesystem::path& path);

// Raw row-major fp32/fp16 blob import (ingestion shim for --raw).
ScalarMatrix read_raw_blob(const std::filesystem::path& path, Dtype dtype,
                           uint32_t rows, uint32_t cols);

}  // namespace fpx
