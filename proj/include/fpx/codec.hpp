#pragma once

#include <cstdint>
#include <vector>

#include "fpx/format.hpp"

namespace fpx {

enum class Dtype : uint32_t { Fp32 = 0, Fp16 = 1 };
enum class Layout : uint8_t { RowMajor = 0, ColMajor = 1 };

// Dense matrix of fp32 values or fp16 bit patterns. Exactly one of the two
// payload vectors is populated, matching dtype.
struct ScalarMatrix {
    Dtype dtype = Dtype::Fp32;
    Layout layout = Layout::RowMajor;
    uint32_t rows = 0;
    uint32_t cols = 0;
    std::vector<float> f32;
    std::vector<uint16_t> f16;

    size_t element_count() const { return size_t(rows) * cols; }
    size_t index(uint32_t r, uint32_t c) const {
        return layout == Layout::RowMajor ? size_t(r) * cols + c
                                          : size_t(c) * rows + r;
    }

    static ScalarMatrix zeros(Dtype dt, Layout lo, uint32_t rows, uint32_t cols);
};

ScalarMatrix to_fp32(const ScalarMatrix& m);
ScalarMatrix to_fp16(const ScalarMatrix& m);

// Row-major grid of x-bit codes with one fp16 scale per row. Dimensions are
// padded to multiples of 64; the pre-padding shape is kept for trimming.
struct QuantizedMatrix {
    FpxFormat format;
    uint32_t rows = 0;       // padded, multiple of 64
    uint32_t cols = 0;       // padded, multiple of 64
    uint32_t orig_rows = 0;
    uint32_t orig_cols = 0;
    std::vector<uint8_t> codes;    // rows*cols, one code per byte
    std::vector<uint16_t> scales;  // fp16 pattern per padded row

    uint8_t code_at(uint32_t r, uint32_t c) const {
        return codes[size_t(r) * cols + c];
    }

    bool operator==(const QuantizedMatrix&) const = default;
};

// Exact value of an x-bit code: (-1)^S * 1.M * 2^(E-bias), subnormals
// (E field 0) are 0.M * 2^(1-bias). Throws InvalidCode if code has bits
// above total_bits.
float decode_scalar(uint32_t code, const FpxFormat& fmt);

// Nearest code under round-to-nearest-even; saturates to the max-magnitude
// code beyond the representable range. Throws InvalidValue on NaN.
uint32_t encode_scalar(double value, const FpxFormat& fmt);

// Row-wise quantization of an fp32 row-major matrix. Rows/cols are
// zero-padded to multiples of 64 first. Scale per row = absmax/max_rep
// rounded to fp16; an all-zero row gets scale 1.0. Throws ScaleOverflow if
// a scale (or its 2^(15-bias)-folded effective form) does not fit in fp16.
QuantizedMatrix quantize_matrix(const ScalarMatrix& m, const FpxFormat& fmt);

// The scalar de-quantization oracle: each element is the exact FPx value
// rounded to fp16, then multiplied by its row scale in fp16 RNE arithmetic.
// Every optimized path must match this bit-for-bit. Returns a row-major
// fp16-pattern matrix of padded shape.
ScalarMatrix dequantize_reference(const QuantizedMatrix& q);

// Effective per-row scale used by the runtime: fp16(scale * 2^(15-bias)),
// folding the deferred exponent re-bias into the scale multiply.
uint16_t effective_scale(uint16_t row_scale, const FpxFormat& fmt);

}  // namespace fpx
