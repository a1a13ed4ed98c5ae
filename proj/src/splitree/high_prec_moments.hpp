#pragma once

#include "splitree/high_prec.hpp"
#include "splitree/variant.hpp"

#include <vector>

namespace splitree {

//! Moments from the same recurrences as moment_table, carried in HighPrec at
//! the current working precision. This is the path used beyond the exact
//! limit (asymptotic constants and residual profiles need n in the
//! thousands). For Sort, g and h hold xi and eta.
struct HighPrecMoments {
    Variant variant;
    std::vector<HighPrec> g;
    std::vector<HighPrec> h; //!< empty unless second moments were requested
};

//! \throws Error(UnsupportedVariant) for MaxFindRevised.
HighPrecMoments high_prec_moments(Variant variant, unsigned n_max, bool with_second = true);

} // namespace splitree
