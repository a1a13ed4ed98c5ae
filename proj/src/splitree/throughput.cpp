#include "splitree/throughput.hpp"

#include "splitree/errors.hpp"

#include <optional>
#include <string>

namespace splitree {

namespace {

void check_q(unsigned q) {
    if (q < 2) {
        throw Error{ErrorCode::InvalidArgument, "q must be at least 2, got " + std::to_string(q)};
    }
}

//! Limit on bisection steps; each halves the bracket.
constexpr unsigned MAX_BISECTIONS = 4000;

} // unnamed::

HighPrec equation_residual(unsigned q, const HighPrec& lambda, const HighPrec& tol, unsigned k_max) {
    check_q(q);
    if (tol <= 0) {
        throw Error{ErrorCode::InvalidArgument, "tolerance must be positive"};
    }
    if (lambda <= 0 || lambda >= 1) {
        throw Error{ErrorCode::DomainError, "lambda must lie in (0, 1)"};
    }
    HighPrec qq{q};
    HighPrec ratio = qq / (qq - 1);
    HighPrec lhs = (qq * (1 - lambda) - 1) / (lambda * qq * qq) * exp(lambda * ratio);

    HighPrec x = ratio * lambda;
    HighPrec cutoff = tol / 10;
    HighPrec inverseQ = 1 / qq;
    HighPrec power{1};     // x^k / k!
    HighPrec qPower{1};    // q^-k
    HighPrec rhs{0};
    for (unsigned k = 1;; ++k) {
        if (k > k_max) {
            throw Error{ErrorCode::NonConvergence,
                        "series did not reach the tolerance within " + std::to_string(k_max) + " terms"};
        }
        power *= x / k;
        qPower *= inverseQ;
        HighPrec weight = HighPrec{k} * (1 - inverseQ) / (1 - qPower) - inverseQ;
        HighPrec term = HighPrec{k} / (k + 1) * weight * power;
        rhs += term;
        if (k > 2 * x + 2 && abs(term) < cutoff) {
            break;
        }
    }
    return lhs - rhs;
}

CriticalPoint lambda_critical(unsigned q, const HighPrec& tol, unsigned k_max) {
    check_q(q);
    if (tol <= 0) {
        throw Error{ErrorCode::InvalidArgument, "tolerance must be positive"};
    }
    HighPrec top = 1 - HighPrec{1} / q;
    HighPrec step{SCAN_STEP};
    CriticalPoint result{q, 0, 0, {}, 0};

    std::optional<std::size_t> downward;
    HighPrec previousLambda = step;
    HighPrec previous = equation_residual(q, previousLambda, tol, k_max);
    for (unsigned i = 2;; ++i) {
        HighPrec lambda = step * i;
        if (lambda >= top) {
            break;
        }
        HighPrec current = equation_residual(q, lambda, tol, k_max);
        if ((previous > 0) != (current > 0) || current == 0) {
            if (!downward && previous > 0) {
                downward = result.brackets.size();
            }
            result.brackets.push_back({previousLambda, lambda});
        }
        previousLambda = lambda;
        previous = current;
    }
    if (result.brackets.empty()) {
        throw Error{ErrorCode::NoRootFound,
                    "no sign change of the residual in (0, 1 - 1/q) for q = " + std::to_string(q)};
    }
    result.selected = downward.value_or(0);

    HighPrec lower = result.brackets[result.selected].lower;
    HighPrec upper = result.brackets[result.selected].upper;
    bool lowerPositive = equation_residual(q, lower, tol, k_max) > 0;
    for (unsigned i = 0;; ++i) {
        if (i > MAX_BISECTIONS) {
            throw Error{ErrorCode::NonConvergence, "bisection did not reach the tolerance"};
        }
        HighPrec middle = (lower + upper) / 2;
        HighPrec value = equation_residual(q, middle, tol, k_max);
        if (upper - lower < tol && abs(value) < tol) {
            result.lambda = middle;
            result.residual = value;
            break;
        }
        if (middle == lower || middle == upper) {
            throw Error{ErrorCode::NonConvergence, "tolerance is below the working precision"};
        }
        if ((value > 0) == lowerPositive) {
            lower = middle;
        } else {
            upper = middle;
        }
    }
    return result;
}

HighPrec blocked_lambda(unsigned q) {
    check_q(q);
    return log(HighPrec{q}) / q;
}

} // namespace splitree
