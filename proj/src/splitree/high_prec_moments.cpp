#include "splitree/high_prec_moments.hpp"

#include "splitree/detail/recurrences.hpp"
#include "splitree/errors.hpp"

#include <string>

namespace splitree {

HighPrecMoments high_prec_moments(Variant variant, unsigned n_max, bool with_second) {
    if (!has_exact_moments(variant)) {
        throw Error{ErrorCode::UnsupportedVariant,
                    "no moment recurrence for variant '" + std::string{cli_name(variant)} + "'"};
    }
    if (variant != Variant::Sort) {
        auto seq = detail::run_recurrence<HighPrec>(variant, n_max, with_second);
        return {variant, std::move(seq.g), std::move(seq.h)};
    }

    auto height = detail::run_recurrence<HighPrec>(Variant::ElectionHeight, n_max, with_second);
    HighPrecMoments result{variant, {}, {}};
    result.g.reserve(n_max + 1);
    HighPrec xiSum{0};
    for (unsigned n = 0; n <= n_max; ++n) {
        HighPrec xi{1};
        if (n >= 2) {
            xi = 1 + height.g[n] + 2 * xiSum / n;
        }
        xiSum += xi;
        result.g.push_back(std::move(xi));
    }
    if (with_second) {
        result.h.reserve(n_max + 1);
        for (unsigned n = 0; n <= n_max; ++n) {
            HighPrec eta{0};
            if (n >= 2) {
                const HighPrec& g = height.g[n];
                HighPrec inner{0};
                for (unsigned k = 0; k < n; ++k) {
                    inner += result.h[k] + result.g[k] * result.g[n - k - 1];
                }
                eta = 2 * g + height.h[n] - 2 * (1 + g) * (1 + g - result.g[n]) + 2 * inner / n;
            }
            result.h.push_back(std::move(eta));
        }
    }
    return result;
}

} // namespace splitree
