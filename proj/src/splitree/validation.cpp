#include "splitree/validation.hpp"

#include "splitree/asymptotics.hpp"
#include "splitree/errors.hpp"
#include "splitree/exact_moments.hpp"

#include <string>

namespace splitree {

namespace {

constexpr const char* SERIES_TOLERANCE = "1e-20";
constexpr const char* SERIES_AGREEMENT = "1e-18";

ValidationCheck make_check(CheckKind kind,
                           Variant variant,
                           unsigned n,
                           HighPrec expected,
                           HighPrec observed,
                           HighPrec statistic,
                           HighPrec bound) {
    bool passed = abs(statistic) <= bound;
    return {kind,     variant, n, std::move(expected), std::move(observed), std::move(statistic),
            std::move(bound), passed};
}

ValidationCheck z_test(Variant variant, unsigned n, const HighPrec& exact, const SimulationSummary& summary) {
    HighPrec z{0};
    if (summary.std_error > 0) {
        z = (summary.mean - exact) / summary.std_error;
    } else if (summary.mean != exact) {
        // A constant sample that misses the exact value.
        z = HighPrec{1e300};
    }
    return make_check(CheckKind::ZTest, variant, n, exact, summary.mean, z, HighPrec{Z_LIMIT});
}

} // unnamed::

std::string_view check_kind_name(CheckKind kind) noexcept {
    switch (kind) {
    case CheckKind::ZTest:
        return "z-test";
    case CheckKind::Series:
        return "series";
    case CheckKind::Residual:
        return "residual";
    }
    return "unknown";
}

HighPrec residual_bound(Variant variant, unsigned n) {
    if (variant == Variant::MaxFind) {
        return HighPrec{2};
    }
    return 2 * (1 + log(HighPrec{n}) / ln2()) / n;
}

ValidationReport validate(unsigned n_max, std::uint64_t trials, std::uint64_t seed, const SimulatorOptions& options) {
    if (n_max < 2) {
        throw Error{ErrorCode::InvalidArgument, "n_max must be at least 2"};
    }
    if (trials < 2) {
        throw Error{ErrorCode::InvalidArgument, "at least 2 trials are required"};
    }
    if (n_max > DEFAULT_EXACT_LIMIT) {
        throw Error{ErrorCode::ExactLimitExceeded,
                    "n_max " + std::to_string(n_max) + " exceeds the exact limit " +
                        std::to_string(DEFAULT_EXACT_LIMIT)};
    }
    ValidationReport report;
    for (Variant variant : ALL_VARIANTS) {
        if (variant == Variant::MaxFindRevised) {
            auto summary = estimate(variant, 2, trials, seed, options);
            report.checks.push_back(z_test(variant, 2, HighPrec{9} / 2, summary));
            continue;
        }
        auto table = moment_table(variant, n_max);
        for (unsigned n = 2; n <= n_max; ++n) {
            HighPrec exact = to_high_prec(table[n].mean());
            auto summary = estimate(variant, n, trials, seed, options);
            report.checks.push_back(z_test(variant, n, exact, summary));

            if (variant == Variant::Conflict) {
                HighPrec series = conflict_mean_series(n, HighPrec{SERIES_TOLERANCE});
                report.checks.push_back(make_check(CheckKind::Series, variant, n, exact, series,
                                                   abs(series - exact), HighPrec{SERIES_AGREEMENT}));
            }

            HighPrec prediction = asymptotic_prediction(variant, n);
            HighPrec residual = exact - prediction;
            if (variant == Variant::Conflict || variant == Variant::Sort) {
                residual /= n;
            }
            report.checks.push_back(make_check(CheckKind::Residual, variant, n, exact, prediction, residual,
                                               residual_bound(variant, n)));
        }
    }
    for (const auto& check : report.checks) {
        if (!check.passed) {
            ++report.failures;
        }
    }
    return report;
}

} // namespace splitree
