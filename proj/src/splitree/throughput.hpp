#pragma once

#include "splitree/high_prec.hpp"

#include <vector>

namespace splitree {

inline constexpr unsigned DEFAULT_SERIES_CAP = 200;

//! Left minus right side of the maximum stable throughput equation for
//! q-ary splitting with free access:
//!   [q(1-l) - 1] / (l q^2) exp(q l / (q-1))
//!     - sum_k k/(k+1) (k(1-1/q)/(1-q^-k) - 1/q) (q/(q-1))^k l^k / k!
//! The series stops once a term past the peak is below tol / 10.
//! \throws Error(InvalidArgument) for q < 2 or tol <= 0,
//!         Error(DomainError) unless 0 < lambda < 1,
//!         Error(NonConvergence) if k_max terms do not suffice.
HighPrec equation_residual(unsigned q,
                           const HighPrec& lambda,
                           const HighPrec& tol,
                           unsigned k_max = DEFAULT_SERIES_CAP);

struct Bracket {
    HighPrec lower;
    HighPrec upper;
};

struct CriticalPoint {
    unsigned q;
    HighPrec lambda;
    HighPrec residual;
    //! Every sign change found by the scan of (0, 1 - 1/q).
    std::vector<Bracket> brackets;
    std::size_t selected;
};

inline constexpr double SCAN_STEP = 0.01;

//! Scans (0, 1 - 1/q) in steps of SCAN_STEP and refines the first crossing
//! from positive to negative residual by bisection, until the bracket is
//! narrower than tol and the residual is below tol in magnitude.
//! \throws Error(NoRootFound) if the scan finds no sign change,
//!         Error(NonConvergence) if bisection stalls at the working precision.
CriticalPoint lambda_critical(unsigned q, const HighPrec& tol, unsigned k_max = DEFAULT_SERIES_CAP);

//! ln(q) / q, the blocked-access throughput.
//! \throws Error(InvalidArgument) for q < 2.
HighPrec blocked_lambda(unsigned q);

} // namespace splitree
