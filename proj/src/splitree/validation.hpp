#pragma once

#include "splitree/high_prec.hpp"
#include "splitree/simulator.hpp"
#include "splitree/variant.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace splitree {

enum class CheckKind {
    ZTest,    //!< simulated mean against the exact mean
    Series,   //!< Conflict infinite series against the exact mean
    Residual, //!< exact mean against the asymptotic form
};

std::string_view check_kind_name(CheckKind kind) noexcept;

struct ValidationCheck {
    CheckKind kind;
    Variant variant;
    unsigned n;
    HighPrec expected;
    HighPrec observed;
    HighPrec statistic; //!< z score, absolute difference or residual
    HighPrec bound;     //!< the check passes when |statistic| <= bound
    bool passed;
};

struct ValidationReport {
    std::vector<ValidationCheck> checks;
    std::size_t failures{0};
};

inline constexpr double Z_LIMIT = 5.0;

//! Bound on |residual| used by the residual check: 2 (1 + log2 n) / n, or 2
//! for MaxFind whose asymptotic form has no printed offset.
HighPrec residual_bound(Variant variant, unsigned n);

//! Cross-checks every variant for 2 <= n <= n_max: simulation against exact
//! means (|z| <= 5; MaxFindRevised only at n = 2 against 9/2), the Conflict
//! series against g_n (within 1e-18), and residuals against residual_bound.
//! \throws Error(InvalidArgument) for n_max < 2 or trials < 2,
//!         Error(ExactLimitExceeded) for n_max above DEFAULT_EXACT_LIMIT.
ValidationReport validate(unsigned n_max,
                          std::uint64_t trials,
                          std::uint64_t seed,
                          const SimulatorOptions& options = {});

} // namespace splitree
