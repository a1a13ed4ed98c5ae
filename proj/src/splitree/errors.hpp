#pragma once

#include <stdexcept>
#include <string>

namespace splitree {

enum class ErrorCode {
    InvalidArgument,
    UnsupportedVariant,
    ExactLimitExceeded,
    DomainError,
    ScriptExhausted,
    ScriptLengthMismatch,
    DepthCapExceeded,
    PrecisionUnachievable,
    NoRootFound,
    NonConvergence,
};

const char* to_string(ErrorCode code) noexcept;

//! Exception thrown by every fallible operation in the library. The code is
//! what callers branch on; the message is for humans.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), m_Code(code) {}

    ErrorCode code() const noexcept { return m_Code; }

private:
    ErrorCode m_Code;
};

} // namespace splitree
