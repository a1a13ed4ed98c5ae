#pragma once

#include <array>
#include <optional>
#include <string_view>

namespace splitree {

//! The randomized splitting algorithms modelled by the library.
enum class Variant {
    Conflict,       //!< full conflict resolution, vertices incl. empty ones
    ElectionHeight, //!< root-to-leader path length
    ElectionSize,   //!< election tree vertices excluding empty ones
    DrawHeight,     //!< election height, two survivors accepted as a draw
    DrawSize,       //!< election size, two survivors accepted as a draw
    CoinToss,       //!< rounds until every coin shows heads
    MaxFind,        //!< maximum finding with running-maximum pruning
    MaxFindRevised, //!< maximum finding without left-empty vertices (simulation only)
    Sort,           //!< election-pivot quicksort, total election time plus one
};

inline constexpr std::array<Variant, 9> ALL_VARIANTS{
    Variant::Conflict,   Variant::ElectionHeight, Variant::ElectionSize,
    Variant::DrawHeight, Variant::DrawSize,       Variant::CoinToss,
    Variant::MaxFind,    Variant::MaxFindRevised, Variant::Sort};

//! Variants with an exact moment recurrence.
inline constexpr std::array<Variant, 8> EXACT_VARIANTS{
    Variant::Conflict,   Variant::ElectionHeight, Variant::ElectionSize,
    Variant::DrawHeight, Variant::DrawSize,       Variant::CoinToss,
    Variant::MaxFind,    Variant::Sort};

//! Command line name, e.g. "draw-height".
std::string_view cli_name(Variant variant) noexcept;

//! Inverse of cli_name.
std::optional<Variant> parse_variant(std::string_view name) noexcept;

inline bool has_exact_moments(Variant variant) noexcept {
    return variant != Variant::MaxFindRevised;
}

} // namespace splitree
