#pragma once

#include "bmv/matrix.hpp"

#include <initializer_list>

namespace bmv::test {

inline Rational R(const char* s) { return parse_rational(s); }
inline Gaussian G(const char* re, const char* im = "0") { return {parse_rational(re), parse_rational(im)}; }

/// Row-major square matrix from nested lists.
inline ExactMatrix square(std::initializer_list<std::initializer_list<Gaussian>> rows)
{
    const auto n = static_cast<Index>(rows.size());
    ExactMatrix m(n, n);
    Index i = 0;
    for (const auto& row : rows) {
        Index j = 0;
        for (const auto& v : row) m(i, j++) = v;
        ++i;
    }
    return m;
}

inline HermitianMatrix herm(std::initializer_list<std::initializer_list<Gaussian>> rows) { return HermitianMatrix(square(rows)); }

inline HermitianMatrix diag(std::initializer_list<const char*> values)
{
    std::vector<Rational> d;
    for (const char* v : values) d.push_back(parse_rational(v));
    return HermitianMatrix::diagonal(d);
}

}  // namespace bmv::test
