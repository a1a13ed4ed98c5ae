#include "splitree/variant.hpp"

#include "splitree/errors.hpp"

namespace splitree {

const char* to_string(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::InvalidArgument:
        return "InvalidArgument";
    case ErrorCode::UnsupportedVariant:
        return "UnsupportedVariant";
    case ErrorCode::ExactLimitExceeded:
        return "ExactLimitExceeded";
    case ErrorCode::DomainError:
        return "DomainError";
    case ErrorCode::ScriptExhausted:
        return "ScriptExhausted";
    case ErrorCode::ScriptLengthMismatch:
        return "ScriptLengthMismatch";
    case ErrorCode::DepthCapExceeded:
        return "DepthCapExceeded";
    case ErrorCode::PrecisionUnachievable:
        return "PrecisionUnachievable";
    case ErrorCode::NoRootFound:
        return "NoRootFound";
    case ErrorCode::NonConvergence:
        return "NonConvergence";
    }
    return "Unknown";
}

std::string_view cli_name(Variant variant) noexcept {
    switch (variant) {
    case Variant::Conflict:
        return "conflict";
    case Variant::ElectionHeight:
        return "height";
    case Variant::ElectionSize:
        return "size";
    case Variant::DrawHeight:
        return "draw-height";
    case Variant::DrawSize:
        return "draw-size";
    case Variant::CoinToss:
        return "coin";
    case Variant::MaxFind:
        return "max";
    case Variant::MaxFindRevised:
        return "maxrev";
    case Variant::Sort:
        return "sort";
    }
    return "unknown";
}

std::optional<Variant> parse_variant(std::string_view name) noexcept {
    for (auto variant : ALL_VARIANTS) {
        if (cli_name(variant) == name) {
            return variant;
        }
    }
    return std::nullopt;
}

} // namespace splitree
