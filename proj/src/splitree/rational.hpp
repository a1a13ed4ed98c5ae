#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace splitree {

//! Exact rational. GMP keeps every value canonical: lowest terms with a
//! positive denominator.
using Rational = mpq_class;
using Integer = mpz_class;

//! "p/q", or "p" when the denominator is one.
inline std::string to_string(const Rational& value) {
    return value.get_str();
}

//! Parses "p/q", "p" or a terminating decimal such as "0.25".
Rational parse_rational(std::string_view text);

//! 2^-n.
inline Rational inverse_power_of_two(unsigned n) {
    Rational result{1};
    mpz_mul_2exp(result.get_den_mpz_t(), result.get_den_mpz_t(), n);
    return result;
}

} // namespace splitree
