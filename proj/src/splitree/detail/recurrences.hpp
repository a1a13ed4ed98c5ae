#pragma once

// Moment recurrences shared by the exact rational and the HighPrec paths.
// Every variant is written as g_n = A / d and h_n = B / d with the
// self-referential f_n terms already moved to the left-hand side. The
// formulas live once, in run_recurrence; the two number types differ only in
// the sequence kernels (binomial sums, convolutions) below.

#include "splitree/high_prec.hpp"
#include "splitree/rational.hpp"
#include "splitree/variant.hpp"

#include <cstddef>
#include <vector>

namespace splitree::detail {

//! Exact sequence stored as integer numerators over one shared denominator,
//! so that the inner binomial sums are integer-only and need no gcds.
class ExactSequence {
public:
    void push(const Rational& value) {
        const Integer& den = value.get_den();
        if (!mpz_divisible_p(m_Denominator.get_mpz_t(), den.get_mpz_t())) {
            Integer factor;
            mpz_gcd(factor.get_mpz_t(), m_Denominator.get_mpz_t(), den.get_mpz_t());
            mpz_divexact(factor.get_mpz_t(), den.get_mpz_t(), factor.get_mpz_t());
            m_Denominator *= factor;
            for (auto& scaled : m_Scaled) {
                scaled *= factor;
            }
        }
        Integer multiplier;
        mpz_divexact(multiplier.get_mpz_t(), m_Denominator.get_mpz_t(), den.get_mpz_t());
        m_Scaled.push_back(value.get_num() * multiplier);
        m_Values.push_back(value);
    }
    void pop() {
        m_Scaled.pop_back();
        m_Values.pop_back();
    }
    std::size_t size() const { return m_Values.size(); }
    const Rational& operator[](std::size_t k) const { return m_Values[k]; }
    const Integer& scaled(std::size_t k) const { return m_Scaled[k]; }
    const Integer& denominator() const { return m_Denominator; }
    const std::vector<Rational>& values() const { return m_Values; }

private:
    Integer m_Denominator{1};
    std::vector<Integer> m_Scaled;
    std::vector<Rational> m_Values;
};

class HighPrecSequence {
public:
    void push(const HighPrec& value) { m_Values.push_back(value); }
    void pop() { m_Values.pop_back(); }
    std::size_t size() const { return m_Values.size(); }
    const HighPrec& operator[](std::size_t k) const { return m_Values[k]; }
    const std::vector<HighPrec>& values() const { return m_Values; }

private:
    std::vector<HighPrec> m_Values;
};

//! Row n of Pascal's triangle, exact.
struct ExactRow {
    unsigned n{0};
    std::vector<Integer> binomial;

    void assign(unsigned size) {
        n = size;
        binomial.resize(n + 1);
        binomial[0] = 1;
        for (unsigned k = 0; k < n; ++k) {
            binomial[k + 1] = binomial[k] * (n - k);
            mpz_divexact_ui(binomial[k + 1].get_mpz_t(), binomial[k + 1].get_mpz_t(), k + 1);
        }
    }
};

//! Row n of Pascal's triangle scaled by 2^-n, built multiplicatively:
//! w_{k+1} = w_k (n - k) / (k + 1). All terms are positive so nothing cancels.
struct HighPrecRow {
    unsigned n{0};
    std::vector<HighPrec> weight;

    void assign(unsigned size) {
        n = size;
        weight.resize(n + 1);
        weight[0] = ldexp(HighPrec{1}, -static_cast<int>(n));
        for (unsigned k = 0; k < n; ++k) {
            weight[k + 1] = weight[k] * (n - k);
            weight[k + 1] /= (k + 1);
        }
    }
};

template<typename NUM>
struct Kernels;

template<>
struct Kernels<Rational> {
    using Sequence = ExactSequence;
    using Row = ExactRow;

    static Rational pow2(long e) {
        Rational result{1};
        if (e >= 0) {
            mpz_mul_2exp(result.get_num_mpz_t(), result.get_num_mpz_t(), static_cast<unsigned long>(e));
        } else {
            mpz_mul_2exp(result.get_den_mpz_t(), result.get_den_mpz_t(), static_cast<unsigned long>(-e));
        }
        return result;
    }

    static Rational over(const Integer& numerator, const Integer& denominator, long twoExponent) {
        Rational result{numerator, denominator};
        if (twoExponent >= 0) {
            mpz_mul_2exp(result.get_num_mpz_t(), result.get_num_mpz_t(), static_cast<unsigned long>(twoExponent));
        } else {
            mpz_mul_2exp(result.get_den_mpz_t(), result.get_den_mpz_t(), static_cast<unsigned long>(-twoExponent));
        }
        result.canonicalize();
        return result;
    }

    //! sum_{k < count} C(n, k) 2^-n x_k
    static Rational binomial_mean(const Row& row, const Sequence& x, std::size_t count) {
        Integer sum{0};
        for (std::size_t k = 0; k < count; ++k) {
            mpz_addmul(sum.get_mpz_t(), row.binomial[k].get_mpz_t(), x.scaled(k).get_mpz_t());
        }
        return over(sum, x.denominator(), -static_cast<long>(row.n));
    }

    //! sum_{k=0}^{n} C(n, k) 2^-n x_k x_{n-k}; x must hold n + 1 values.
    static Rational binomial_convolution(const Row& row, const Sequence& x) {
        Integer sum{0};
        unsigned n = row.n;
        for (unsigned k = 0; k <= n / 2; ++k) {
            Integer product = x.scaled(k) * x.scaled(n - k);
            product *= row.binomial[k];
            if (k != n - k) {
                product *= 2;
            }
            sum += product;
        }
        Integer den = x.denominator() * x.denominator();
        return over(sum, den, -static_cast<long>(n));
    }

    //! sum_{j=1}^{n} C(n - 1, j - 1) x_j, given row n - 1.
    static Rational shifted_binomial_sum(const Row& previous, const Sequence& x) {
        Integer sum{0};
        for (unsigned j = 1; j <= previous.n + 1; ++j) {
            mpz_addmul(sum.get_mpz_t(), previous.binomial[j - 1].get_mpz_t(), x.scaled(j).get_mpz_t());
        }
        return over(sum, x.denominator(), 0);
    }

    //! sum_{k=1}^{n} a_{n-k} b_k
    static Rational reversed_dot(const Sequence& a, const Sequence& b, unsigned n) {
        Integer sum{0};
        for (unsigned k = 1; k <= n; ++k) {
            mpz_addmul(sum.get_mpz_t(), a.scaled(n - k).get_mpz_t(), b.scaled(k).get_mpz_t());
        }
        Integer den = a.denominator() * b.denominator();
        return over(sum, den, 0);
    }
};

template<>
struct Kernels<HighPrec> {
    using Sequence = HighPrecSequence;
    using Row = HighPrecRow;

    static HighPrec pow2(long e) { return ldexp(HighPrec{1}, static_cast<int>(e)); }

    static HighPrec binomial_mean(const Row& row, const Sequence& x, std::size_t count) {
        HighPrec sum{0};
        for (std::size_t k = 0; k < count; ++k) {
            sum += row.weight[k] * x[k];
        }
        return sum;
    }

    static HighPrec binomial_convolution(const Row& row, const Sequence& x) {
        HighPrec sum{0};
        for (unsigned k = 0; k <= row.n; ++k) {
            sum += row.weight[k] * x[k] * x[row.n - k];
        }
        return sum;
    }

    static HighPrec shifted_binomial_sum(const Row& previous, const Sequence& x) {
        HighPrec sum{0};
        for (unsigned j = 1; j <= previous.n + 1; ++j) {
            sum += previous.weight[j - 1] * x[j];
        }
        return ldexp(sum, static_cast<int>(previous.n));
    }

    static HighPrec reversed_dot(const Sequence& a, const Sequence& b, unsigned n) {
        HighPrec sum{0};
        for (unsigned k = 1; k <= n; ++k) {
            sum += a[n - k] * b[k];
        }
        return sum;
    }
};

template<typename NUM>
struct MomentSequences {
    std::vector<NUM> g;
    std::vector<NUM> h;
};

//! Initial conditions. The draw variants stop at two competitors, so their
//! recurrences start at n = 3.
template<typename NUM>
MomentSequences<NUM> initial_conditions(Variant variant) {
    MomentSequences<NUM> result;
    switch (variant) {
    case Variant::Conflict:
    case Variant::MaxFind:
        result.g = {NUM{1}, NUM{1}};
        result.h = {NUM{0}, NUM{0}};
        break;
    case Variant::ElectionHeight:
        result.g = {NUM{0}, NUM{0}};
        result.h = {NUM{0}, NUM{0}};
        break;
    case Variant::ElectionSize:
        result.g = {NUM{0}, NUM{1}};
        result.h = {NUM{0}, NUM{0}};
        break;
    case Variant::DrawHeight:
        result.g = {NUM{0}, NUM{0}, NUM{0}};
        result.h = {NUM{0}, NUM{0}, NUM{0}};
        break;
    case Variant::DrawSize:
        result.g = {NUM{0}, NUM{1}, NUM{1}};
        result.h = {NUM{0}, NUM{0}, NUM{0}};
        break;
    case Variant::CoinToss:
        result.g = {NUM{0}};
        result.h = {NUM{0}};
        break;
    case Variant::MaxFindRevised:
    case Variant::Sort:
        break;
    }
    return result;
}

//! g (and optionally h) of \p variant for n = 0..n_max. Only meaningful for
//! Conflict, the election/draw variants, CoinToss and MaxFind; Sort is
//! layered on top of ElectionHeight by the callers.
template<typename NUM>
MomentSequences<NUM> run_recurrence(Variant variant, unsigned n_max, bool with_second) {
    using K = Kernels<NUM>;
    typename K::Sequence g;
    typename K::Sequence h;
    {
        auto initial = initial_conditions<NUM>(variant);
        for (std::size_t k = 0; k < initial.g.size() && k <= n_max; ++k) {
            g.push(initial.g[k]);
            h.push(initial.h[k]);
        }
    }
    const auto start = static_cast<unsigned>(g.size());

    typename K::Row row;
    typename K::Row previousRow;
    // MaxFind only: S_k = sum_{j=1}^k C(k-1, j-1) g_j, and running prefix sums
    // of 2^{-i-1} g_i and 2^{-i-1} h_i over i < n.
    typename K::Sequence transform;
    NUM tailG{0};
    NUM tailH{0};
    if (variant == Variant::MaxFind && start >= 2) {
        transform.push(NUM{0});
        transform.push(g[1]);
        for (unsigned i = 0; i < start; ++i) {
            tailG += K::pow2(-static_cast<long>(i) - 1) * g[i];
            tailH += K::pow2(-static_cast<long>(i) - 1) * h[i];
        }
        previousRow.assign(start - 1);
    }

    for (unsigned n = start; n <= n_max; ++n) {
        row.assign(n);
        const NUM a = K::pow2(-static_cast<long>(n));
        NUM sumG = K::binomial_mean(row, g, n);
        NUM sumH{0};
        if (with_second) {
            sumH = K::binomial_mean(row, h, n);
        }
        NUM gn{0};
        NUM hn{0};
        switch (variant) {
        case Variant::Conflict: {
            NUM d = 1 - 2 * a;
            gn = (1 + 2 * sumG) / d;
            if (with_second) {
                g.push(gn);
                NUM convolution = K::binomial_convolution(row, g);
                g.pop();
                hn = (-2 + 2 * gn + 2 * convolution + 2 * sumH) / d;
            }
            break;
        }
        case Variant::ElectionHeight:
        case Variant::DrawHeight: {
            NUM d = 1 - 2 * a;
            gn = (1 + sumG) / d;
            if (with_second) {
                hn = (-2 + 2 * gn + sumH) / d;
            }
            break;
        }
        case Variant::ElectionSize:
        case Variant::DrawSize: {
            NUM d = 1 - 2 * a;
            gn = 1 + (1 + sumG) / d;
            if (with_second) {
                hn = 2 + (4 * (sumG + a * gn) + sumH) / d;
            }
            break;
        }
        case Variant::CoinToss: {
            NUM d = 1 - a;
            gn = (1 + sumG) / d;
            if (with_second) {
                hn = (-2 + 2 * gn + sumH) / d;
            }
            break;
        }
        case Variant::MaxFind: {
            NUM d = 1 - 2 * a;
            gn = (1 + sumG + tailG) / d;
            g.push(gn);
            transform.push(K::shifted_binomial_sum(previousRow, g));
            g.pop();
            if (with_second) {
                NUM cross = K::pow2(1 - static_cast<long>(n)) * K::reversed_dot(g, transform, n);
                hn = (-2 + 2 * (1 + a) * gn + sumH + tailH + cross) / d;
                tailH += K::pow2(-static_cast<long>(n) - 1) * hn;
            }
            tailG += K::pow2(-static_cast<long>(n) - 1) * gn;
            std::swap(previousRow, row);
            break;
        }
        case Variant::MaxFindRevised:
        case Variant::Sort:
            break;
        }
        g.push(gn);
        h.push(with_second ? hn : NUM{0});
    }
    MomentSequences<NUM> result{g.values(), {}};
    if (with_second) {
        result.h = h.values();
    }
    return result;
}

} // namespace splitree::detail
