#include "fpx/error.hpp"

namespace fpx {

const char* error_code_name(ErrorCode c) {
    switch (c) {
        case ErrorCode::InvalidFormat: return "invalid-format";
        case ErrorCode::InvalidCode: return "invalid-code";
        case ErrorCode::InvalidValue: return "invalid-value";
        case ErrorCode::ScaleOverflow: return "scale-overflow";
        case ErrorCode::ShapeMismatch: return "shape-mismatch";
        case ErrorCode::RaggedInput: return "ragged-input";
        case ErrorCode::UnsupportedSplit: return "unsupported-split";
        case ErrorCode::IndexOutOfRange: return "index-out-of-range";
        case ErrorCode::BadMagic: return "bad-magic";
        case ErrorCode::BadVersion: return "bad-version";
        case ErrorCode::Truncated: return "truncated";
        case ErrorCode::Corrupt: return "corrupt";
        case ErrorCode::IoFailure: return "io-failure";
    }
    return "unknown";
}

std::string Error::formatted() const {
    std::string s = "error[";
    s += error_code_name(code_);
    s += "] ";
    s += what();
    if (offset_) {
        s += " (at byte ";
        s += std::to_string(*offset_);
        s += ")";
    }
    return s;
}

}  // namespace fpx
