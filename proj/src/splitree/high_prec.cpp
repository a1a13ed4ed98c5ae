#include "splitree/high_prec.hpp"

#include "splitree/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace splitree {

namespace {

std::recursive_mutex& precision_mutex() {
    static std::recursive_mutex mutex;
    return mutex;
}

// First Stieltjes constant to 70 significant digits.
constexpr const char* GAMMA1_LITERAL =
    "-0.07281584548367672486058637587490131913773633833433795259900655974140143";

} // unnamed::

PrecisionScope::PrecisionScope(unsigned digits10)
    : m_Lock{precision_mutex()}, m_Previous{HighPrec::default_precision()} {
    if (digits10 == 0 || digits10 > MAX_PRECISION_DIGITS + GUARD_DIGITS) {
        throw Error{ErrorCode::InvalidArgument,
                    "precision must be in [1, " + std::to_string(MAX_PRECISION_DIGITS) +
                        "] digits"};
    }
    HighPrec::default_precision(digits10);
}

PrecisionScope::~PrecisionScope() {
    HighPrec::default_precision(m_Previous);
}

unsigned working_digits() {
    return HighPrec::default_precision();
}

HighPrec to_high_prec(const Rational& value) {
    HighPrec numerator{value.get_num().get_mpz_t()};
    HighPrec denominator{value.get_den().get_mpz_t()};
    return numerator / denominator;
}

HighPrec parse_high_prec(std::string_view text) {
    if (text.find('/') != std::string_view::npos) {
        return to_high_prec(parse_rational(text));
    }
    HighPrec result;
    std::string buffer{text};
    if (buffer.empty() || mpfr_set_str(result.backend().data(), buffer.c_str(), 10, MPFR_RNDN) != 0) {
        throw Error{ErrorCode::InvalidArgument, "not a decimal number: '" + buffer + "'"};
    }
    return result;
}

std::string to_string(const HighPrec& value, unsigned significant) {
    if (value == 0) {
        return "0";
    }
    significant = std::max(significant, 1u);
    long exponent{0};
    mpfr_get_d_2exp(&exponent, value.backend().data(), MPFR_RNDN);
    // 2^(exponent-1) <= |value| < 2^exponent, so this is within one of floor(log10|value|).
    auto magnitude = static_cast<long>(
        std::floor(static_cast<double>(exponent - 1) * 0.30102999566398120));
    HighPrec scaled = abs(value);
    HighPrec ten_power = pow(HighPrec{10}, magnitude);
    if (scaled >= ten_power * 10) {
        ++magnitude;
    }
    long decimals = std::max<long>(0, static_cast<long>(significant) - 1 - magnitude);
    return value.str(static_cast<std::streamsize>(decimals), std::ios_base::fixed);
}

HighPrec pi() {
    HighPrec result;
    mpfr_const_pi(result.backend().data(), MPFR_RNDN);
    return result;
}

HighPrec euler_gamma() {
    HighPrec result;
    mpfr_const_euler(result.backend().data(), MPFR_RNDN);
    return result;
}

HighPrec ln2() {
    HighPrec result;
    mpfr_const_log2(result.backend().data(), MPFR_RNDN);
    return result;
}

HighPrec stieltjes_gamma1() {
    return HighPrec{GAMMA1_LITERAL};
}

HighPrec relative_difference(const HighPrec& a, const HighPrec& b) {
    HighPrec scale = abs(b);
    if (scale == 0) {
        return abs(a);
    }
    return abs(a - b) / scale;
}

int agreeing_digits(const HighPrec& a, const HighPrec& b) {
    HighPrec difference = relative_difference(a, b);
    if (difference == 0) {
        return std::numeric_limits<int>::max();
    }
    return static_cast<int>(std::floor(-log10(difference).convert_to<double>()));
}

} // namespace splitree
