#include "splitree/rational.hpp"

#include "splitree/errors.hpp"

#include <algorithm>
#include <cctype>

namespace splitree {

namespace {

bool is_integer_literal(std::string_view text) {
    if (!text.empty() && (text.front() == '-' || text.front() == '+')) {
        text.remove_prefix(1);
    }
    return !text.empty() &&
           std::all_of(text.begin(), text.end(),
                       [](unsigned char c) { return std::isdigit(c) != 0; });
}

Integer to_integer(std::string_view text) {
    if (!text.empty() && text.front() == '+') {
        text.remove_prefix(1);
    }
    return Integer{std::string{text}, 10};
}

[[noreturn]] void reject(std::string_view text) {
    throw Error{ErrorCode::InvalidArgument,
                "not a rational number: '" + std::string{text} + "'"};
}

} // unnamed::

Rational parse_rational(std::string_view text) {
    if (auto slash = text.find('/'); slash != std::string_view::npos) {
        auto numerator = text.substr(0, slash);
        auto denominator = text.substr(slash + 1);
        if (!is_integer_literal(numerator) || !is_integer_literal(denominator)) {
            reject(text);
        }
        Integer den = to_integer(denominator);
        if (den == 0) {
            reject(text);
        }
        Rational result{to_integer(numerator), den};
        result.canonicalize();
        return result;
    }
    if (auto dot = text.find('.'); dot != std::string_view::npos) {
        auto whole = text.substr(0, dot);
        auto fraction = text.substr(dot + 1);
        bool negative = !whole.empty() && whole.front() == '-';
        if (!whole.empty() && (whole.front() == '-' || whole.front() == '+')) {
            whole.remove_prefix(1);
        }
        if (whole.empty()) {
            whole = "0";
        }
        if (!is_integer_literal(whole) ||
            (!fraction.empty() && !is_integer_literal(fraction)) ||
            (!fraction.empty() && (fraction.front() == '-' || fraction.front() == '+'))) {
            reject(text);
        }
        Integer scale;
        mpz_ui_pow_ui(scale.get_mpz_t(), 10, fraction.size());
        Integer digits{std::string{whole} + std::string{fraction}, 10};
        Rational result{negative ? Integer{-digits} : digits, scale};
        result.canonicalize();
        return result;
    }
    if (!is_integer_literal(text)) {
        reject(text);
    }
    return Rational{to_integer(text)};
}

} // namespace splitree
