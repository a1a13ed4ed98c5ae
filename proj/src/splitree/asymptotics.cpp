#include "splitree/asymptotics.hpp"

#include "splitree/errors.hpp"
#include "splitree/high_prec_moments.hpp"

#include <boost/math/special_functions/trigamma.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <string>
#include <utility>

namespace splitree {

namespace {

struct ConstantInfo {
    ConstantId id;
    std::string_view name;
    std::string_view published;
    unsigned achievable;
};

// Recurrence-fed sorting series: extrapolated estimates from 10^4 and
// 2 10^4 terms agree to 2e-11.
constexpr unsigned SORT_DIGITS = 10;
// The first Stieltjes constant is a 70-digit literal.
constexpr unsigned GAMMA1_LIMITED_DIGITS = STIELTJES_GAMMA1_DIGITS - 2;

constexpr std::array<ConstantInfo, 16> CONSTANTS{{
    {ConstantId::ConflictMeanSlope, "CONFLICT_MEAN_SLOPE", "2.8853900817", MAX_PRECISION_DIGITS},
    {ConstantId::ConflictVarSlope, "CONFLICT_VAR_SLOPE", "3.3834344923", MAX_PRECISION_DIGITS},
    {ConstantId::ConflictVarQuarter, "CONFLICT_VAR_QUARTER", "0.8458586230", MAX_PRECISION_DIGITS},
    {ConstantId::HeightMeanOffset, "HEIGHT_MEAN_OFFSET", "0.5", MAX_PRECISION_DIGITS},
    {ConstantId::HeightVarConst, "HEIGHT_VAR_CONST", "3.1166951643", GAMMA1_LIMITED_DIGITS},
    {ConstantId::SizeMeanOffset, "SIZE_MEAN_OFFSET", "1.1812500478", MAX_PRECISION_DIGITS},
    {ConstantId::DrawHeightOffset, "DRAW_HEIGHT_OFFSET", "-0.6865691104", MAX_PRECISION_DIGITS},
    {ConstantId::DrawSizeOffset, "DRAW_SIZE_OFFSET", "-0.5986036178", MAX_PRECISION_DIGITS},
    {ConstantId::CoinMeanOffset, "COIN_MEAN_OFFSET", "1.3327461772", MAX_PRECISION_DIGITS},
    {ConstantId::CoinVarConst, "COIN_VAR_CONST", "3.5070480758", MAX_PRECISION_DIGITS},
    {ConstantId::MaxMeanSlope, "MAX_MEAN_SLOPE", "4.7462764416", MAX_PRECISION_DIGITS},
    {ConstantId::MaxVarSlope, "MAX_VAR_SLOPE", "11.7013270183", MAX_PRECISION_DIGITS},
    {ConstantId::SortMeanLimit, "SORT_MEAN_LIMIT", "3.5455178132", SORT_DIGITS},
    {ConstantId::SortAltMeanLimit, "SORT_ALT_MEAN_LIMIT", "3.6798261095", SORT_DIGITS},
    {ConstantId::NaiveSortConst, "NAIVE_SORT_CONST", "1.4463764113", MAX_PRECISION_DIGITS},
    {ConstantId::ResemblanceConst, "RESEMBLANCE_CONST", "5.2793782410", MAX_PRECISION_DIGITS},
}};

const ConstantInfo& info(ConstantId id) noexcept {
    return CONSTANTS[static_cast<std::size_t>(id)];
}

//! 10^-digits at the working precision.
HighPrec epsilon_for(unsigned digits) {
    return pow(HighPrec{10}, -static_cast<long>(digits));
}

HighPrec ln2_squared() {
    HighPrec l = ln2();
    return l * l;
}

HighPrec conflict_var_slope(unsigned digits) {
    // Terms are below 4^-k; stop once the next one cannot matter.
    HighPrec eps = epsilon_for(digits + 2);
    HighPrec sum{0};
    for (long k = 1;; ++k) {
        HighPrec d = ldexp(HighPrec{1}, k) + 1;
        HighPrec term = 1 / (d * d);
        sum += term;
        if (term < eps) {
            break;
        }
    }
    return (1 + 8 * sum) / ln2();
}

HighPrec max_var_slope(unsigned digits) {
    // h_i grows polylogarithmically, so 2^-i h_i < 10^-(digits+4) once
    // i > 3.33 (digits + 4) + 64.
    auto terms = static_cast<unsigned>(3.33 * (digits + 4)) + 64;
    HighPrec p = pi();
    HighPrec p2 = p * p;
    return (p2 - 2 - p2 * p2 / 9 + max_var_inner_series(terms)) / ln2();
}

HighPrec naive_sort_const(unsigned digits) {
    // 1 - x psi'(x) ~ -1/(2x) at x = 2^l.
    HighPrec eps = epsilon_for(digits + 4);
    HighPrec sum{2};
    for (long l = 1;; ++l) {
        HighPrec x = ldexp(HighPrec{1}, l);
        sum += 1 - x * boost::math::trigamma(x);
        if (1 / x < eps) {
            break;
        }
    }
    return sum;
}

HighPrec resemblance_const(unsigned digits) {
    // Stirling: the l-th term is (ln(2 pi 2^l) / 2 + o(1)) 2^-l.
    HighPrec eps = epsilon_for(digits + 4);
    HighPrec lnTwo = ln2();
    HighPrec sum{0};
    for (long l = 0;; ++l) {
        HighPrec x = ldexp(HighPrec{1}, l);
        HighPrec lnGamma;
        HighPrec argument = x + 1;
        int sign = 0;
        mpfr_lgamma(lnGamma.backend().data(), &sign, argument.backend().data(), MPFR_RNDN);
        HighPrec term = 1 + (lnGamma - x * l * lnTwo) / x;
        sum += term;
        if (l > 8 && (l + 4) / x < eps) {
            break;
        }
    }
    return 2 * sum;
}

HighPrec evaluate(ConstantId id, unsigned digits) {
    switch (id) {
    case ConstantId::ConflictMeanSlope:
        return 2 / ln2();
    case ConstantId::ConflictVarSlope:
        return conflict_var_slope(digits);
    case ConstantId::ConflictVarQuarter:
        return conflict_var_slope(digits) / 4;
    case ConstantId::HeightMeanOffset:
        return HighPrec{1} / 2;
    case ConstantId::HeightVarConst: {
        HighPrec p = pi();
        HighPrec g = euler_gamma();
        HighPrec l2 = ln2_squared();
        return HighPrec{1} / 12 + p * p / (6 * l2) - (g * g + 2 * stieltjes_gamma1()) / l2;
    }
    case ConstantId::SizeMeanOffset:
        return 2 - (log(pi()) - euler_gamma()) / ln2();
    case ConstantId::DrawHeightOffset: {
        HighPrec p = pi();
        return HighPrec{1} / 2 - p * p / (12 * ln2());
    }
    case ConstantId::DrawSizeOffset:
        return draw_size_offset_with(8);
    case ConstantId::CoinMeanOffset:
        return HighPrec{1} / 2 + euler_gamma() / ln2();
    case ConstantId::CoinVarConst: {
        HighPrec p = pi();
        return HighPrec{1} / 12 + p * p / (6 * ln2_squared());
    }
    case ConstantId::MaxMeanSlope: {
        HighPrec p = pi();
        return p * p / (3 * ln2());
    }
    case ConstantId::MaxVarSlope:
        return max_var_slope(digits);
    case ConstantId::SortMeanLimit:
    case ConstantId::SortAltMeanLimit:
        return sort_limit_series(id, SORT_SERIES_TERMS).extrapolated;
    case ConstantId::NaiveSortConst:
        return naive_sort_const(digits);
    case ConstantId::ResemblanceConst:
        return resemblance_const(digits);
    }
    throw Error{ErrorCode::InvalidArgument, "unknown constant"};
}

std::mutex& cache_mutex() {
    static std::mutex mutex;
    return mutex;
}

std::map<std::pair<ConstantId, unsigned>, HighPrec>& constant_cache() {
    static std::map<std::pair<ConstantId, unsigned>, HighPrec> cache;
    return cache;
}

std::map<std::pair<ConstantId, unsigned>, SeriesEstimate>& series_cache() {
    static std::map<std::pair<ConstantId, unsigned>, SeriesEstimate> cache;
    return cache;
}

HighPrec log2_of(unsigned n) {
    return log(HighPrec{n}) / ln2();
}

} // unnamed::

std::string_view constant_name(ConstantId id) noexcept {
    return info(id).name;
}

std::optional<ConstantId> parse_constant(std::string_view name) noexcept {
    for (const auto& entry : CONSTANTS) {
        if (entry.name == name) {
            return entry.id;
        }
    }
    return std::nullopt;
}

std::string_view published_value(ConstantId id) noexcept {
    return info(id).published;
}

unsigned achievable_digits(ConstantId id) noexcept {
    return info(id).achievable;
}

HighPrec constant(ConstantId id, unsigned digits) {
    if (digits == 0 || digits > MAX_PRECISION_DIGITS) {
        throw Error{ErrorCode::InvalidArgument,
                    "precision must be in [1, " + std::to_string(MAX_PRECISION_DIGITS) + "] digits"};
    }
    if (digits > achievable_digits(id)) {
        throw Error{ErrorCode::PrecisionUnachievable,
                    std::string{constant_name(id)} + " is only available to " +
                        std::to_string(achievable_digits(id)) + " digits"};
    }
    {
        std::lock_guard lock{cache_mutex()};
        auto found = constant_cache().find({id, digits});
        if (found != constant_cache().end()) {
            return found->second;
        }
    }
    PrecisionScope scope{digits + GUARD_DIGITS};
    HighPrec value = evaluate(id, digits);
    std::lock_guard lock{cache_mutex()};
    constant_cache().emplace(std::pair{id, digits}, value);
    return value;
}

HighPrec draw_size_offset_with(unsigned divisor) {
    if (divisor == 0) {
        throw Error{ErrorCode::InvalidArgument, "divisor must be positive"};
    }
    HighPrec p = pi();
    return 2 - (log(p) - euler_gamma() + p * p / divisor) / ln2();
}

SeriesEstimate sort_limit_series(ConstantId id, unsigned ell_max) {
    if (id != ConstantId::SortMeanLimit && id != ConstantId::SortAltMeanLimit) {
        throw Error{ErrorCode::InvalidArgument, "not a sorting-limit constant"};
    }
    if (ell_max < 6) {
        throw Error{ErrorCode::InvalidArgument, "ell_max must be at least 6"};
    }
    {
        std::lock_guard lock{cache_mutex()};
        auto found = series_cache().find({id, ell_max});
        if (found != series_cache().end()) {
            return found->second;
        }
    }
    // Accuracy is limited by truncation, not by rounding; 30 digits is ample.
    PrecisionScope scope{30};
    bool alternate = id == ConstantId::SortAltMeanLimit;
    auto moments = high_prec_moments(alternate ? Variant::MaxFind : Variant::ElectionHeight, ell_max, false);
    const auto& g = moments.g;
    // g_l - g_(l-1) ~ c / l with c the slope of g_l in ln l.
    HighPrec c = alternate ? HighPrec{pi() * pi() / (3 * ln2())} : HighPrec{1 / ln2()};
    HighPrec base = alternate ? HighPrec{13} / 6 : HighPrec{8} / 3;
    int factor = alternate ? 1 : 2;
    unsigned half = ell_max / 2;
    HighPrec sum{0};
    HighPrec halfCorrected{0};
    for (unsigned l = 3; l <= ell_max; ++l) {
        sum += (g[l] - g[l - 1]) / (l + 1);
        if (l == half) {
            halfCorrected = base + factor * (sum + c / (half + 1));
        }
    }
    SeriesEstimate estimate;
    estimate.ell_max = ell_max;
    estimate.partial = base + factor * sum;
    estimate.corrected = base + factor * (sum + c / (ell_max + 1));
    estimate.extrapolated = 2 * estimate.corrected - halfCorrected;
    std::lock_guard lock{cache_mutex()};
    series_cache().emplace(std::pair{id, ell_max}, estimate);
    return estimate;
}

HighPrec max_var_inner_series(unsigned i_max) {
    auto moments = high_prec_moments(Variant::MaxFind, i_max, true);
    HighPrec sum{0};
    for (unsigned i = 0; i <= i_max; ++i) {
        sum += ldexp(moments.h[i], -static_cast<long>(i) - 1);
    }
    return sum;
}

HighPrec asymptotic_prediction(Variant variant, unsigned n) {
    if (n == 0) {
        throw Error{ErrorCode::InvalidArgument, "n must be positive"};
    }
    auto c = [](ConstantId id) { return constant(id, std::min(working_digits(), achievable_digits(id))); };
    switch (variant) {
    case Variant::Conflict:
        return n * c(ConstantId::ConflictMeanSlope);
    case Variant::ElectionHeight:
        return log2_of(n) + c(ConstantId::HeightMeanOffset);
    case Variant::ElectionSize:
        return 2 * log2_of(n) + c(ConstantId::SizeMeanOffset);
    case Variant::DrawHeight:
        return log2_of(n) + c(ConstantId::DrawHeightOffset);
    case Variant::DrawSize:
        return 2 * log2_of(n) + c(ConstantId::DrawSizeOffset);
    case Variant::CoinToss:
        return log2_of(n) + c(ConstantId::CoinMeanOffset);
    case Variant::MaxFind:
        return c(ConstantId::MaxMeanSlope) * log(HighPrec{n});
    case Variant::Sort:
        return n * c(ConstantId::SortMeanLimit);
    case Variant::MaxFindRevised:
        break;
    }
    throw Error{ErrorCode::UnsupportedVariant,
                "no asymptotic form for variant '" + std::string{cli_name(variant)} + "'"};
}

ResidualProfile residual_profile(Variant variant, const std::vector<unsigned>& n_list) {
    if (!has_exact_moments(variant)) {
        throw Error{ErrorCode::UnsupportedVariant,
                    "no moment recurrence for variant '" + std::string{cli_name(variant)} + "'"};
    }
    ResidualProfile profile{variant, {}};
    if (n_list.empty()) {
        return profile;
    }
    unsigned n_max = *std::max_element(n_list.begin(), n_list.end());
    if (n_max > HIGH_PREC_LIMIT) {
        throw Error{ErrorCode::ExactLimitExceeded,
                    "n " + std::to_string(n_max) + " exceeds the limit " + std::to_string(HIGH_PREC_LIMIT)};
    }
    auto moments = high_prec_moments(variant, n_max, false);
    bool linear = variant == Variant::Conflict || variant == Variant::Sort;
    for (unsigned n : n_list) {
        if (n == 0) {
            throw Error{ErrorCode::InvalidArgument, "n must be positive"};
        }
        HighPrec prediction = asymptotic_prediction(variant, n);
        HighPrec residual = moments.g[n] - prediction;
        if (linear) {
            residual /= n;
        }
        profile.points.push_back({n, moments.g[n], prediction, residual});
    }
    return profile;
}

} // namespace splitree
