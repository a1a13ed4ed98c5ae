#pragma once

#include "splitree/rational.hpp"

#include <boost/multiprecision/mpfr.hpp>

#include <mutex>
#include <string>
#include <string_view>

namespace splitree {

//! Arbitrary precision binary float. The working precision is the process
//! wide MPFR default; use PrecisionScope to change it.
using HighPrec = boost::multiprecision::mpfr_float;

inline constexpr unsigned DEFAULT_PRECISION_DIGITS = 50;
inline constexpr unsigned MAX_PRECISION_DIGITS = 1000;

//! Extra decimal digits carried internally on top of the requested ones.
inline constexpr unsigned GUARD_DIGITS = 10;

//! Sets the default HighPrec precision for its lifetime and restores the
//! previous value on exit. Holds a process-wide recursive lock because the
//! default precision is global state: HighPrec work is serialized.
class PrecisionScope {
public:
    explicit PrecisionScope(unsigned digits10);
    ~PrecisionScope();

    PrecisionScope(const PrecisionScope&) = delete;
    PrecisionScope& operator=(const PrecisionScope&) = delete;

private:
    std::unique_lock<std::recursive_mutex> m_Lock;
    unsigned m_Previous;
};

//! Current working precision in decimal digits.
unsigned working_digits();

HighPrec to_high_prec(const Rational& value);
HighPrec parse_high_prec(std::string_view text);

//! Fixed-point decimal with \p significant digits, e.g. "2.8853900817".
std::string to_string(const HighPrec& value, unsigned significant);

//! Mathematical constants at the working precision.
HighPrec pi();
HighPrec euler_gamma();
HighPrec ln2();
//! First Stieltjes constant (literal, 70 significant digits).
HighPrec stieltjes_gamma1();
inline constexpr unsigned STIELTJES_GAMMA1_DIGITS = 70;

//! Relative difference |a - b| / max(|b|, tiny).
HighPrec relative_difference(const HighPrec& a, const HighPrec& b);

//! Number of leading significant decimal digits on which a and b agree,
//! measured as floor(-log10(relative difference)).
int agreeing_digits(const HighPrec& a, const HighPrec& b);

} // namespace splitree
