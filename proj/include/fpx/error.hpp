#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace fpx {

enum class ErrorCode {
    InvalidFormat,
    InvalidCode,
    InvalidValue,
    ScaleOverflow,
    ShapeMismatch,
    RaggedInput,
    UnsupportedSplit,
    IndexOutOfRange,
    BadMagic,
    BadVersion,
    Truncated,
    Corrupt,
    IoFailure,
};

const char* error_code_name(ErrorCode c);

// Structured error: code + message + optional byte offset (for file errors),
// so CLI consumers can script against "error[<code>] message (at byte N)".
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}
    Error(ErrorCode code, const std::string& message, uint64_t offset)
        : std::runtime_error(message), code_(code), offset_(offset) {}

    ErrorCode code() const { return code_; }
    std::optional<uint64_t> offset() const { return offset_; }
    std::string formatted() const;

private:
    ErrorCode code_;
    std::optional<uint64_t> offset_;
};

}  // namespace fpx
