#pragma once

// Test-only reference computations that share no code path with the
// library routines they check.

#include "bmv/matrix.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

namespace bmv::oracle {

/// Leibniz expansion over all permutations.
inline Gaussian leibniz_determinant(const ExactMatrix& m)
{
    const auto n = static_cast<std::size_t>(m.rows());
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    Gaussian total(0);
    do {
        int inversions = 0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                if (perm[i] > perm[j]) ++inversions;
        Gaussian term(inversions % 2 ? -1 : 1);
        for (std::size_t i = 0; i < n; ++i)
            term = term * m(static_cast<Index>(i), static_cast<Index>(perm[i]));
        total += term;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return total;
}

/// Coefficients 0..order of a scalar power series product.
inline std::vector<Rational> series_product(const std::vector<Rational>& x, const std::vector<Rational>& y, long order)
{
    std::vector<Rational> out(static_cast<std::size_t>(order + 1));
    for (long i = 0; i <= order; ++i)
        for (long j = 0; i + j <= order; ++j)
            out[static_cast<std::size_t>(i + j)] += x[static_cast<std::size_t>(i)] * y[static_cast<std::size_t>(j)];
    return out;
}

/// 1/(1 - c t) through t^order.
inline std::vector<Rational> geometric(const Rational& c, long order)
{
    std::vector<Rational> out;
    Rational power = 1;
    for (long j = 0; j <= order; ++j) {
        out.push_back(power);
        power *= c;
    }
    return out;
}

/// (1 - t)^{-i} (1 - c t)^{-j} through t^order by repeated multiplication.
inline std::vector<Rational> pole_series(int i, int j, const Rational& c, long order)
{
    std::vector<Rational> s(static_cast<std::size_t>(order + 1));
    s[0] = 1;
    for (int r = 0; r < i; ++r) s = series_product(s, geometric(Rational(1), order), order);
    for (int r = 0; r < j; ++r) s = series_product(s, geometric(c, order), order);
    return s;
}

}  // namespace bmv::oracle
