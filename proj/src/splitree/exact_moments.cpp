#include "splitree/exact_moments.hpp"

#include "splitree/detail/recurrences.hpp"
#include "splitree/errors.hpp"

#include <string>

namespace splitree {

namespace {

void check_exact_request(Variant variant, unsigned n_max, unsigned exact_limit) {
    if (!has_exact_moments(variant)) {
        throw Error{ErrorCode::UnsupportedVariant, "no exact recurrence; use simulate"};
    }
    if (n_max > exact_limit) {
        throw Error{ErrorCode::ExactLimitExceeded,
                    "n_max " + std::to_string(n_max) + " exceeds the exact limit " +
                        std::to_string(exact_limit)};
    }
}

//! Binomial coefficients C(n, k) for k = 0..n.
std::vector<Integer> binomials(unsigned n) {
    std::vector<Integer> row(n + 1);
    row[0] = 1;
    for (unsigned k = 0; k < n; ++k) {
        row[k + 1] = row[k] * (n - k);
        mpz_divexact_ui(row[k + 1].get_mpz_t(), row[k + 1].get_mpz_t(), k + 1);
    }
    return row;
}

//! Election height pgf values f_0..f_n at z.
std::vector<Rational> election_height_pgf(unsigned n, const Rational& z, unsigned stop) {
    std::vector<Rational> f;
    f.reserve(n + 1);
    for (unsigned m = 0; m <= n; ++m) {
        if (m <= stop) {
            f.emplace_back(1);
            continue;
        }
        auto c = binomials(m);
        Rational a = inverse_power_of_two(m);
        Rational sum{-1};
        for (unsigned k = 0; k < m; ++k) {
            sum += c[k] * f[k];
        }
        f.push_back(z * a * sum / (1 - 2 * z * a));
    }
    return f;
}

std::vector<Rational> election_size_pgf(unsigned n, const Rational& z, unsigned stop) {
    std::vector<Rational> f;
    f.reserve(n + 1);
    for (unsigned m = 0; m <= n; ++m) {
        if (m == 0) {
            f.emplace_back(1);
            continue;
        }
        if (m <= stop) {
            f.push_back(z);
            continue;
        }
        auto c = binomials(m);
        Rational a = inverse_power_of_two(m);
        Rational sum{-1};
        for (unsigned k = 0; k < m; ++k) {
            sum += c[k] * f[k];
        }
        f.push_back(z * z * a * sum / (1 - 2 * z * a));
    }
    return f;
}

std::vector<Rational> conflict_pgf(unsigned n, const Rational& z) {
    std::vector<Rational> f;
    f.reserve(n + 1);
    for (unsigned m = 0; m <= n; ++m) {
        if (m <= 1) {
            f.push_back(z);
            continue;
        }
        auto c = binomials(m);
        Rational a = inverse_power_of_two(m);
        Rational sum{0};
        for (unsigned k = 1; k < m; ++k) {
            sum += c[k] * f[k] * f[m - k];
        }
        // k = 0 and k = m both contribute z 2^-m z f_m.
        f.push_back(z * a * sum / (1 - 2 * z * z * a));
    }
    return f;
}

std::vector<Rational> coin_toss_pgf(unsigned n, const Rational& z) {
    std::vector<Rational> f;
    f.reserve(n + 1);
    f.emplace_back(1);
    for (unsigned m = 1; m <= n; ++m) {
        auto c = binomials(m);
        Rational a = inverse_power_of_two(m);
        Rational sum{0};
        for (unsigned k = 0; k < m; ++k) {
            sum += c[k] * f[k];
        }
        f.push_back(z * a * sum / (1 - z * a));
    }
    return f;
}

std::vector<Rational> max_find_pgf(unsigned n, const Rational& z) {
    std::vector<Rational> f;
    f.reserve(n + 1);
    for (unsigned m = 0; m <= n; ++m) {
        if (m <= 1) {
            f.push_back(z);
            continue;
        }
        Rational a = inverse_power_of_two(m);
        Rational sum{0};
        for (unsigned k = 1; k <= m; ++k) {
            auto c = binomials(k - 1);
            Rational inner{0};
            for (unsigned j = 1; j <= k; ++j) {
                if (k == m && j == m) {
                    continue; // f_0 f_m, moved to the left
                }
                inner += c[j - 1] * f[j];
            }
            sum += f[m - k] * inner;
        }
        f.push_back(z * a * sum / (1 - z * z * a - z * a * f[0]));
    }
    return f;
}

std::vector<Rational> sort_pgf(unsigned n, const Rational& z) {
    auto height = election_height_pgf(n, z, 1);
    std::vector<Rational> psi;
    psi.reserve(n + 1);
    for (unsigned m = 0; m <= n; ++m) {
        if (m <= 1) {
            psi.push_back(z);
            continue;
        }
        Rational sum{0};
        for (unsigned k = 0; k < m; ++k) {
            sum += psi[k] * psi[m - k - 1];
        }
        psi.push_back(z * height[m] * sum / m);
    }
    return psi;
}

} // unnamed::

MomentRecord::MomentRecord(Variant variant, unsigned n, Rational g, Rational h, Rational var)
    : m_Variant{variant}, m_N{n}, m_G{std::move(g)}, m_H{std::move(h)}, m_Var{std::move(var)} {
    if (m_Var != m_H - m_G * m_G + m_G) {
        throw Error{ErrorCode::InvalidArgument, "variance must equal h - g^2 + g"};
    }
}

MomentRecord MomentRecord::from_moments(Variant variant, unsigned n, Rational g, Rational h) {
    Rational var = h - g * g + g;
    return MomentRecord{variant, n, std::move(g), std::move(h), std::move(var)};
}

std::vector<MomentRecord> moment_table(Variant variant, unsigned n_max, unsigned exact_limit) {
    check_exact_request(variant, n_max, exact_limit);
    std::vector<MomentRecord> table;
    table.reserve(n_max + 1);
    if (variant == Variant::Sort) {
        for (auto& row : sort_moments(n_max, exact_limit)) {
            table.emplace_back(variant, row.n, std::move(row.xi), std::move(row.eta), std::move(row.var));
        }
        return table;
    }
    auto seq = detail::run_recurrence<Rational>(variant, n_max, true);
    for (unsigned n = 0; n <= n_max; ++n) {
        table.push_back(MomentRecord::from_moments(variant, n, seq.g[n], seq.h[n]));
    }
    return table;
}

std::vector<SortMoments> sort_moments(unsigned n_max, unsigned exact_limit) {
    check_exact_request(Variant::Sort, n_max, exact_limit);
    auto height = detail::run_recurrence<Rational>(Variant::ElectionHeight, n_max, true);
    std::vector<SortMoments> rows;
    rows.reserve(n_max + 1);
    detail::ExactSequence xi;
    Rational xiSum{0};
    Rational etaSum{0};
    for (unsigned n = 0; n <= n_max; ++n) {
        SortMoments row{n, Rational{1}, Rational{0}, Rational{0}};
        if (n >= 2) {
            const Rational& g = height.g[n];
            const Rational& h = height.h[n];
            row.xi = 1 + g + 2 * xiSum / n;
            // sum_{k<n} xi_k xi_{n-1-k}
            Integer convolution{0};
            for (unsigned k = 0; k < n; ++k) {
                mpz_addmul(convolution.get_mpz_t(), xi.scaled(k).get_mpz_t(),
                           xi.scaled(n - 1 - k).get_mpz_t());
            }
            Rational products{convolution, xi.denominator() * xi.denominator()};
            products.canonicalize();
            row.eta = 2 * g + h - 2 * (1 + g) * (1 + g - row.xi) + 2 * (etaSum + products) / n;
        }
        row.var = row.eta - row.xi * row.xi + row.xi;
        xiSum += row.xi;
        etaSum += row.eta;
        xi.push(row.xi);
        rows.push_back(std::move(row));
    }
    return rows;
}

Rational pgf_eval(Variant variant, unsigned n, const Rational& z) {
    if (z < 0 || z > 1) {
        throw Error{ErrorCode::DomainError, "pgf argument must lie in [0, 1], got " + to_string(z)};
    }
    switch (variant) {
    case Variant::Conflict:
        return conflict_pgf(n, z)[n];
    case Variant::ElectionHeight:
        return election_height_pgf(n, z, 1)[n];
    case Variant::ElectionSize:
        return election_size_pgf(n, z, 1)[n];
    case Variant::DrawHeight:
        return election_height_pgf(n, z, 2)[n];
    case Variant::DrawSize:
        return election_size_pgf(n, z, 2)[n];
    case Variant::CoinToss:
        return coin_toss_pgf(n, z)[n];
    case Variant::MaxFind:
        return max_find_pgf(n, z)[n];
    case Variant::Sort:
        return sort_pgf(n, z)[n];
    case Variant::MaxFindRevised:
        break;
    }
    throw Error{ErrorCode::UnsupportedVariant,
                "no generating function for variant '" + std::string{cli_name(variant)} + "'"};
}

HighPrec conflict_mean_series(unsigned n, const HighPrec& tol) {
    if (n == 0) {
        throw Error{ErrorCode::InvalidArgument, "n must be positive"};
    }
    if (tol <= 0) {
        throw Error{ErrorCode::InvalidArgument, "tolerance must be positive"};
    }
    auto c = binomials(n);
    // Remaining tail after level m is at most n (n - 1) 2^-m.
    const HighPrec pairs = HighPrec{n} * (n - 1);
    HighPrec sum{0};
    for (unsigned m = 0;; ++m) {
        HighPrec x = ldexp(HighPrec{1}, -static_cast<int>(m));
        HighPrec y = 1 - x;
        // P(Binomial(n, x) >= 2).
        HighPrec tail{0};
        HighPrec xPower = x * x;
        for (unsigned j = 2; j <= n; ++j) {
            tail += HighPrec{c[j].get_mpz_t()} * xPower * pow(y, n - j);
            xPower *= x;
        }
        sum += ldexp(tail, static_cast<int>(m));
        if (pairs * ldexp(HighPrec{1}, -static_cast<int>(m)) < tol) {
            break;
        }
    }
    return 1 + 2 * sum;
}

} // namespace splitree
