#include "fpx/codec.hpp"

#include <cmath>
#include <optional>

#include "fpx/half.hpp"
#include "fpx/parallel.hpp"

namespace fpx {

namespace {

constexpr uint32_t kWarpTile = 64;

uint32_t pad_to_tile(uint32_t n) {
    return (n + kWarpTile - 1) / kWarpTile * kWarpTile;
}

}  // namespace

ScalarMatrix ScalarMatrix::zeros(Dtype dt, Layout lo, uint32_t rows,
                                 uint32_t cols) {
    ScalarMatrix m;
    m.dtype = dt;
    m.layout = lo;
    m.rows = rows;
    m.cols = cols;
    if (dt == Dtype::Fp32)
        m.f32.assign(size_t(rows) * cols, 0.0f);
    else
        m.f16.assign(size_t(rows) * cols, 0);
    return m;
}

ScalarMatrix to_fp32(const ScalarMatrix& m) {
    if (m.dtype == Dtype::Fp32) return m;
    ScalarMatrix out = ScalarMatrix::zeros(Dtype::Fp32, m.layout, m.rows, m.cols);
    for (size_t i = 0; i < m.f16.size(); ++i) out.f32[i] = half_to_float(m.f16[i]);
    return out;
}

ScalarMatrix to_fp16(const ScalarMatrix& m) {
    if (m.dtype == Dtype::Fp16) return m;
    ScalarMatrix out = ScalarMatrix::zeros(Dtype::Fp16, m.layout, m.rows, m.cols);
    for (size_t i = 0; i < m.f32.size(); ++i) out.f16[i] = float_to_half(m.f32[i]);
    return out;
}

float decode_scalar(uint32_t code, const FpxFormat& fmt) {
    if (code >= fmt.code_count())
        throw Error(ErrorCode::InvalidCode,
                    "code " + std::to_string(code) + " out of range for " +
                        fmt.name());
    const uint32_t sign = code >> (fmt.exp_bits + fmt.man_bits);
    const uint32_t e_field = (code >> fmt.man_bits) & ((1u << fmt.exp_bits) - 1);
    const uint32_t m_field = code & ((1u << fmt.man_bits) - 1);

    double v;
    if (e_field == 0) {
        // Subnormal: 0.M * 2^(1-bias)
        v = std::ldexp(double(m_field), 1 - fmt.bias() - fmt.man_bits);
    } else {
        v = std::ldexp(double((1u << fmt.man_bits) + m_field),
                       int(e_field) - fmt.bias() - fmt.man_bits);
    }
    const float f = static_cast<float>(v);
    return sign ? -f : f;
}

uint32_t encode_scalar(double value, const FpxFormat& fmt) {
    if (std::isnan(value))
        throw Error(ErrorCode::InvalidValue, "cannot encode NaN");

    const uint32_t sign_bit = std::signbit(value) ? fmt.sign_mask() : 0;
    const double a = std::fabs(value);
    const double max_rep = fmt.max_representable();
    if (a > max_rep) return sign_bit | (fmt.sign_mask() - 1);  // saturate

    const int e_min = 1 - fmt.bias();
    int e = e_min;
    if (a >= std::ldexp(1.0, e_min)) e = std::ilogb(a);

    // Integer significand on the grid 2^(e - M); nearbyint gives
    // round-to-nearest with ties to even under the default FP environment.
    const double n = std::ldexp(a, fmt.man_bits - e);
    auto k = static_cast<uint32_t>(std::nearbyint(n));

    const uint32_t man_unit = 1u << fmt.man_bits;
    if (k == 2 * man_unit) {  // mantissa carry into the next binade
        k = man_unit;
        ++e;
    }

    uint32_t e_field, m_field;
    if (k < man_unit) {  // subnormal (only reachable in the lowest binade)
        e_field = 0;
        m_field = k;
    } else {
        e_field = static_cast<uint32_t>(e + fmt.bias());
        m_field = k - man_unit;
    }
    return sign_bit | (e_field << fmt.man_bits) | m_field;
}

QuantizedMatrix quantize_matrix(const ScalarMatrix& m, const FpxFormat& fmt) {
    if (m.dtype != Dtype::Fp32 || m.layout != Layout::RowMajor)
        throw Error(ErrorCode::InvalidValue,
                    "quantize expects a row-major fp32 matrix");
    if (m.rows == 0 || m.cols == 0)
        throw Error(ErrorCode::ShapeMismatch, "empty matrix");

    QuantizedMatrix q;
    q.format = fmt;
    q.orig_rows = m.rows;
    q.orig_cols = m.cols;
    q.rows = pad_to_tile(m.rows);
    q.cols = pad_to_tile(m.cols);
    q.codes.assign(size_t(q.rows) * q.cols, 0);
    q.scales.assign(q.rows, 0x3c00);  // 1.0 for padding and all-zero rows

    const double max_rep = fmt.max_representable();
    const int rebias = 15 - fmt.bias();

    struct RowFailure {
        ErrorCode code;
        std::string message;
    };
    std::vector<std::optional<RowFailure>> failure(m.rows);
    parallel_for_blocks(m.rows, [&](size_t begin, size_t end) {
        for (size_t r = begin; r < end; ++r) {
            double absmax = 0.0;
            bool has_nan = false;
            for (uint32_t c = 0; c < m.cols; ++c) {
                const double a = std::fabs(double(m.f32[r * m.cols + c]));
                if (std::isnan(a)) has_nan = true;
                if (a > absmax) absmax = a;
            }
            if (has_nan) {
                failure[r] = {ErrorCode::InvalidValue,
                              "row " + std::to_string(r) + " contains NaN"};
                continue;
            }
            if (absmax == 0.0) continue;  // keep scale 1.0, codes 0

            uint16_t s16 = float_to_half(static_cast<float>(absmax / max_rep));
            if (!half_is_finite(s16)) {
                failure[r] = {ErrorCode::ScaleOverflow,
                              "row " + std::to_string(r) + " scale " +
                                  std::to_string(absmax / max_rep) +
                                  " does not fit in fp16"};
                continue;
            }
            if ((s16 & 0x7fffu) == 0) s16 = (s16 & 0x8000u) | 1;  // avoid 0 scale

            const double s_val = half_to_float(s16);
            const float eff = static_cast<float>(s_val * std::ldexp(1.0, rebias));
            if (!half_is_finite(float_to_half(eff))) {
                failure[r] = {ErrorCode::ScaleOverflow,
                              "row " + std::to_string(r) +
                                  " effective scale overflows fp16 (scale " +
                                  std::to_string(s_val) + " * 2^" +
                                  std::to_string(rebias) + ")"};
                continue;
            }

            q.scales[r] = s16;
            uint8_t* row_codes = q.codes.data() + r * q.cols;
            for (uint32_t c = 0; c < m.cols; ++c)
                row_codes[c] = static_cast<uint8_t>(
                    encode_scalar(double(m.f32[r * m.cols + c]) / s_val, fmt));
        }
    });
    for (const auto& f : failure)
        if (f) throw Error(f->code, f->message);

    return q;
}

ScalarMatrix dequantize_reference(const QuantizedMatrix& q) {
    ScalarMatrix out =
        ScalarMatrix::zeros(Dtype::Fp16, Layout::RowMajor, q.rows, q.cols);
    parallel_for_blocks(q.rows, [&](size_t begin, size_t end) {
        for (size_t r = begin; r < end; ++r) {
            const uint16_t scale = q.scales[r];
            for (uint32_t c = 0; c < q.cols; ++c) {
                const uint16_t h =
                    float_to_half(decode_scalar(q.code_at(r, c), q.format));
                out.f16[r * q.cols + c] = half_mul(h, scale);
            }
        }
    });
    return out;
}

uint16_t effective_scale(uint16_t row_scale, const FpxFormat& fmt) {
    const double v =
        half_to_float(row_scale) * std::ldexp(1.0, 15 - fmt.bias());
    return float_to_half(static_cast<float>(v));
}

}  // namespace fpx
