#pragma once

#include "splitree/high_prec.hpp"
#include "splitree/variant.hpp"

#include <array>
#include <optional>
#include <string_view>
#include <vector>

namespace splitree {

enum class ConstantId {
    ConflictMeanSlope,
    ConflictVarSlope,
    ConflictVarQuarter,
    HeightMeanOffset,
    HeightVarConst,
    SizeMeanOffset,
    DrawHeightOffset,
    DrawSizeOffset,
    CoinMeanOffset,
    CoinVarConst,
    MaxMeanSlope,
    MaxVarSlope,
    SortMeanLimit,
    SortAltMeanLimit,
    NaiveSortConst,
    ResemblanceConst,
};

inline constexpr std::array<ConstantId, 16> ALL_CONSTANTS{
    ConstantId::ConflictMeanSlope, ConstantId::ConflictVarSlope, ConstantId::ConflictVarQuarter,
    ConstantId::HeightMeanOffset,  ConstantId::HeightVarConst,   ConstantId::SizeMeanOffset,
    ConstantId::DrawHeightOffset,  ConstantId::DrawSizeOffset,   ConstantId::CoinMeanOffset,
    ConstantId::CoinVarConst,      ConstantId::MaxMeanSlope,     ConstantId::MaxVarSlope,
    ConstantId::SortMeanLimit,     ConstantId::SortAltMeanLimit, ConstantId::NaiveSortConst,
    ConstantId::ResemblanceConst};

//! Upper-case name, e.g. "DRAW_SIZE_OFFSET".
std::string_view constant_name(ConstantId id) noexcept;
std::optional<ConstantId> parse_constant(std::string_view name) noexcept;

//! Decimal printed in the literature for the constant, as a string.
std::string_view published_value(ConstantId id) noexcept;

//! Largest precision (significant digits) constant() will deliver.
unsigned achievable_digits(ConstantId id) noexcept;

//! The constant evaluated from its defining series or closed form, correct
//! to \p digits significant digits. The result carries digits + GUARD_DIGITS
//! of working precision. Values are cached per (id, digits).
//! \throws Error(PrecisionUnachievable) if digits > achievable_digits(id),
//!         Error(InvalidArgument) if digits is 0 or above MAX_PRECISION_DIGITS.
HighPrec constant(ConstantId id, unsigned digits = DEFAULT_PRECISION_DIGITS);

//! 2 - (ln(pi) - gamma + pi^2 / divisor) / ln 2. The draw size offset is the
//! divisor 8 case; 16 is the misprinted form.
HighPrec draw_size_offset_with(unsigned divisor);

//! Default truncation point of the recurrence-fed sorting series.
inline constexpr unsigned SORT_SERIES_TERMS = 10'000;

//! Partial sum of a sorting-limit series up to ell_max, with and without the
//! c / (ell_max + 1) tail correction. The corrected sum still carries an
//! error P(log2 ell_max) / ell_max with P of period 1 (the fluctuation of
//! g); extrapolated = 2 corrected(ell_max) - corrected(ell_max / 2) cancels
//! it when ell_max is even.
struct SeriesEstimate {
    HighPrec partial;
    HighPrec corrected;
    HighPrec extrapolated;
    unsigned ell_max;
};

//! \throws Error(InvalidArgument) unless id is SortMeanLimit or
//!         SortAltMeanLimit and ell_max >= 6.
SeriesEstimate sort_limit_series(ConstantId id, unsigned ell_max);

//! Partial sums of sum_i 2^(-i-1) h_i (MaxFind h) for i <= i_max.
HighPrec max_var_inner_series(unsigned i_max);

//! Leading asymptotic form of the mean, without fluctuations and o(1):
//! Conflict n 2/ln2, ElectionHeight log2 n + 1/2, ElectionSize 2 log2 n +
//! SIZE_MEAN_OFFSET, DrawHeight log2 n + DRAW_HEIGHT_OFFSET, DrawSize
//! 2 log2 n + DRAW_SIZE_OFFSET, CoinToss log2 n + COIN_MEAN_OFFSET, MaxFind
//! MAX_MEAN_SLOPE ln n, Sort n SORT_MEAN_LIMIT.
//! \throws Error(UnsupportedVariant) for MaxFindRevised,
//!         Error(InvalidArgument) for n == 0.
HighPrec asymptotic_prediction(Variant variant, unsigned n);

//! Largest n residual_profile accepts.
inline constexpr unsigned HIGH_PREC_LIMIT = 1U << 14;

struct ResidualPoint {
    unsigned n;
    HighPrec mean;
    HighPrec prediction;
    HighPrec residual; //!< mean - prediction, divided by n for Conflict and Sort
};

struct ResidualProfile {
    Variant variant;
    std::vector<ResidualPoint> points;
};

//! Means from the HighPrec recurrence at the working precision.
//! \throws Error(ExactLimitExceeded) if some n exceeds HIGH_PREC_LIMIT,
//!         Error(UnsupportedVariant) for MaxFindRevised.
ResidualProfile residual_profile(Variant variant, const std::vector<unsigned>& n_list);

} // namespace splitree
