#pragma once

#include "splitree/high_prec.hpp"
#include "splitree/rational.hpp"
#include "splitree/variant.hpp"

#include <vector>

namespace splitree {

//! Largest n for which exact rational tables are produced by default.
//! Numerators and denominators grow super-exponentially in n.
inline constexpr unsigned DEFAULT_EXACT_LIMIT = 512;

//! Mean g, second factorial moment h and variance of one statistic at one n.
class MomentRecord {
public:
    //! \throws Error(InvalidArgument) unless var == h - g^2 + g.
    MomentRecord(Variant variant, unsigned n, Rational g, Rational h, Rational var);

    //! Derives the variance from g and h.
    static MomentRecord from_moments(Variant variant, unsigned n, Rational g, Rational h);

    Variant variant() const noexcept { return m_Variant; }
    unsigned n() const noexcept { return m_N; }
    const Rational& mean() const noexcept { return m_G; }
    const Rational& second_factorial() const noexcept { return m_H; }
    const Rational& variance() const noexcept { return m_Var; }

private:
    Variant m_Variant;
    unsigned m_N;
    Rational m_G;
    Rational m_H;
    Rational m_Var;
};

struct SortMoments {
    unsigned n;
    Rational xi;  //!< mean of the sorting cost
    Rational eta; //!< second factorial moment
    Rational var;
};

//! Exact moments for n = 0..n_max. Sort rows carry (xi, eta) as (g, h).
//! \throws Error(UnsupportedVariant) for MaxFindRevised,
//!         Error(ExactLimitExceeded) when n_max > exact_limit.
std::vector<MomentRecord>
moment_table(Variant variant, unsigned n_max, unsigned exact_limit = DEFAULT_EXACT_LIMIT);

//! Sorting cost moments built on the election height moments.
std::vector<SortMoments> sort_moments(unsigned n_max, unsigned exact_limit = DEFAULT_EXACT_LIMIT);

//! Exact value of the probability generating function f_n(z) (psi_n(z) for
//! Sort) for rational z in [0, 1].
//! \throws Error(DomainError) for z outside [0, 1],
//!         Error(UnsupportedVariant) for MaxFindRevised.
Rational pgf_eval(Variant variant, unsigned n, const Rational& z);

//! Conflict resolution mean from its infinite series, accurate to \p tol.
//! Each summand is evaluated as a binomial tail probability, which has no
//! cancellation. Uses the current working precision.
HighPrec conflict_mean_series(unsigned n, const HighPrec& tol);

} // namespace splitree
