#pragma once

#include <stdexcept>
#include <string>

namespace latentcodec {

enum class Errc {
    invalid_argument,
    size_overflow,
    non_finite_value,
    bad_magic,
    unsupported_version,
    unsupported_dtype,
    unsupported_mode,
    truncated_payload,
    trailing_data,
    checksum_mismatch,
    corrupt_payload,
    layout_mismatch,
    mode_mismatch,
    dimension_mismatch,
    empty_samples,
    degenerate_range,
    degenerate_variance,
    too_few_patches,
    zero_vector,
    io_error,
};

/// Coarse classification used by the CLI to pick an exit code.
enum class ErrorCategory { usage = 2, io = 3, format = 4, numeric = 5 };

constexpr ErrorCategory category_of(Errc code) noexcept {
    switch (code) {
    case Errc::io_error:
        return ErrorCategory::io;
    case Errc::bad_magic:
    case Errc::unsupported_version:
    case Errc::unsupported_dtype:
    case Errc::unsupported_mode:
    case Errc::truncated_payload:
    case Errc::trailing_data:
    case Errc::checksum_mismatch:
    case Errc::corrupt_payload:
    case Errc::layout_mismatch:
        return ErrorCategory::format;
    case Errc::size_overflow:
    case Errc::non_finite_value:
    case Errc::degenerate_range:
    case Errc::degenerate_variance:
    case Errc::zero_vector:
        return ErrorCategory::numeric;
    case Errc::invalid_argument:
    case Errc::mode_mismatch:
    case Errc::dimension_mismatch:
    case Errc::empty_samples:
    case Errc::too_few_patches:
        return ErrorCategory::usage;
    }
    return ErrorCategory::usage;
}

constexpr const char* to_string(Errc code) noexcept {
    switch (code) {
    case Errc::invalid_argument: return "invalid argument";
    case Errc::size_overflow: return "size overflow";
    case Errc::non_finite_value: return "non-finite value";
    case Errc::bad_magic: return "bad magic";
    case Errc::unsupported_version: return "unsupported version";
    case Errc::unsupported_dtype: return "unsupported dtype";
    case Errc::unsupported_mode: return "unsupported mode";
    case Errc::truncated_payload: return "truncated payload";
    case Errc::trailing_data: return "trailing data";
    case Errc::checksum_mismatch: return "checksum mismatch";
    case Errc::corrupt_payload: return "corrupt payload";
    case Errc::layout_mismatch: return "layout mismatch";
    case Errc::mode_mismatch: return "mode mismatch";
    case Errc::dimension_mismatch: return "dimension mismatch";
    case Errc::empty_samples: return "empty samples";
    case Errc::degenerate_range: return "degenerate range";
    case Errc::degenerate_variance: return "degenerate variance";
    case Errc::too_few_patches: return "too few patches";
    case Errc::zero_vector: return "zero vector";
    case Errc::io_error: return "i/o error";
    }
    return "unknown error";
}

class CodecError : public std::runtime_error {
public:
    CodecError(Errc code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    Errc code() const noexcept { return code_; }
    ErrorCategory category() const noexcept { return category_of(code_); }

private:
    Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw CodecError(code, what); }

}  // namespace latentcodec
