#pragma once

// Coefficient matrices S_{p,q}(A,B): the coefficient of t^q in (A + tB)^(p+q),
// i.e. the sum of all ordered products with p factors A and q factors B.
//
// Five routes are provided and must agree exactly:
//   words            brute-force sum over all C(p+q, q) words (ground truth)
//   recursive        S_{p,q} = A S_{p-1,q} + B S_{p,q-1}
//   recursive_right  S_{p,q} = S_{p-1,q} A + S_{p,q-1} B
//   toeplitz         block (1,k) of T_k(A,B)^m, T_k block upper bidiagonal
//   resolvent        t^j coefficient of (I-tA)^{-1} (B (I-tA)^{-1})^{k-1}
// Any S_{p,q} with min(p,q) < 0 is the zero matrix.
//
// Everything here is templated on the scalar so the same code runs on exact
// Gaussian rationals and on double/complex<double> diagnostics.

#include "bmv/matrix.hpp"

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace bmv {

enum class Engine { words, recursive, recursive_right, toeplitz, resolvent };

std::string_view to_string(Engine engine);
std::optional<Engine> parse_engine(std::string_view name);

/// Raised when the word oracle would have to enumerate more words than its
/// limit allows.
class OracleTooLarge : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr long kWordOracleLimit = 1'000'000;

/// Number of words C(p+q, q), saturating at `cap + 1`.
long word_count(long p, long q, long cap = kWordOracleLimit);

namespace detail {

template <typename Scalar>
void check_pair(const Matrix<Scalar>& a, const Matrix<Scalar>& b)
{
    if (a.rows() != a.cols() || b.rows() != b.cols()) throw std::invalid_argument("engine inputs must be square");
    if (a.rows() != b.rows()) throw std::invalid_argument("dimension mismatch between A and B");
}

template <typename Scalar>
void accumulate_words(const Matrix<Scalar>& a, const Matrix<Scalar>& b, long p, long q, const Matrix<Scalar>& prefix,
                      Matrix<Scalar>& sum)
{
    if (p == 0 && q == 0) {
        sum += prefix;
        return;
    }
    if (p > 0) accumulate_words<Scalar>(a, b, p - 1, q, Matrix<Scalar>(prefix * a), sum);
    if (q > 0) accumulate_words<Scalar>(a, b, p, q - 1, Matrix<Scalar>(prefix * b), sum);
}

}  // namespace detail

/// Ground-truth oracle: explicit sum over every word. Throws OracleTooLarge
/// when C(p+q, q) exceeds `limit`; never truncates silently.
template <typename Scalar>
Matrix<Scalar> s_words(const Matrix<Scalar>& a, const Matrix<Scalar>& b, long p, long q, long limit = kWordOracleLimit)
{
    detail::check_pair(a, b);
    const Index n = a.rows();
    if (p < 0 || q < 0) return Matrix<Scalar>::Zero(n, n);
    if (word_count(p, q, limit) > limit)
        throw OracleTooLarge("oracle too large: C(" + std::to_string(p + q) + "," + std::to_string(q) +
                             ") words exceed the limit of " + std::to_string(limit));
    Matrix<Scalar> sum = Matrix<Scalar>::Zero(n, n);
    detail::accumulate_words<Scalar>(a, b, p, q, Matrix<Scalar>::Identity(n, n), sum);
    return sum;
}

/// Table of S_{p,q} for 0 <= p <= max_p, 0 <= q <= max_q.
template <typename Scalar>
class CoeffTable {
public:
    CoeffTable(Matrix<Scalar> a, Matrix<Scalar> b, long max_p, long max_q)
        : a_(std::move(a)), b_(std::move(b)), max_p_(max_p), max_q_(max_q)
    {
        detail::check_pair(a_, b_);
        if (max_p < 0 || max_q < 0) throw std::invalid_argument("table bounds must be >= 0");
        zero_ = Matrix<Scalar>::Zero(a_.rows(), a_.rows());
        cells_.assign(static_cast<std::size_t>((max_p + 1) * (max_q + 1)), zero_);
    }

    const Matrix<Scalar>& a() const { return a_; }
    const Matrix<Scalar>& b() const { return b_; }
    long max_p() const { return max_p_; }
    long max_q() const { return max_q_; }
    Index dim() const { return a_.rows(); }

    /// Negative indices yield the zero matrix; indices above the bounds throw.
    const Matrix<Scalar>& at(long p, long q) const
    {
        if (p < 0 || q < 0) return zero_;
        return cells_[offset(p, q)];
    }

    Scalar trace(long p, long q) const { return at(p, q).trace(); }

    Matrix<Scalar>& cell(long p, long q) { return cells_[offset(p, q)]; }

private:
    std::size_t offset(long p, long q) const
    {
        if (p > max_p_ || q > max_q_) throw std::out_of_range("coefficient table index beyond bounds");
        return static_cast<std::size_t>(p * (max_q_ + 1) + q);
    }

    Matrix<Scalar> a_;
    Matrix<Scalar> b_;
    long max_p_;
    long max_q_;
    Matrix<Scalar> zero_;
    std::vector<Matrix<Scalar>> cells_;
};

/// Dynamic programme using S_{p,q} = A S_{p-1,q} + B S_{p,q-1}.
template <typename Scalar>
CoeffTable<Scalar> s_table_recursive(const Matrix<Scalar>& a, const Matrix<Scalar>& b, long max_p, long max_q)
{
    CoeffTable<Scalar> table(a, b, max_p, max_q);
    table.cell(0, 0) = Matrix<Scalar>::Identity(a.rows(), a.rows());
    for (long p = 0; p <= max_p; ++p)
        for (long q = 0; q <= max_q; ++q) {
            if (p == 0 && q == 0) continue;
            Matrix<Scalar>& out = table.cell(p, q);
            if (p > 0) out.noalias() += a * table.at(p - 1, q);
            if (q > 0) out.noalias() += b * table.at(p, q - 1);
        }
    return table;
}

/// Same table through S_{p,q} = S_{p-1,q} A + S_{p,q-1} B.
template <typename Scalar>
CoeffTable<Scalar> s_table_recursive_right(const Matrix<Scalar>& a, const Matrix<Scalar>& b, long max_p, long max_q)
{
    CoeffTable<Scalar> table(a, b, max_p, max_q);
    table.cell(0, 0) = Matrix<Scalar>::Identity(a.rows(), a.rows());
    for (long p = 0; p <= max_p; ++p)
        for (long q = 0; q <= max_q; ++q) {
            if (p == 0 && q == 0) continue;
            Matrix<Scalar>& out = table.cell(p, q);
            if (p > 0) out.noalias() += table.at(p - 1, q) * a;
            if (q > 0) out.noalias() += table.at(p, q - 1) * b;
        }
    return table;
}

/// Tr S_{m,k} for m = 0..m_max with fixed k, keeping only the frontier
/// S_{m,0..k} (memory O(k n^2)).
template <typename Scalar>
std::vector<Scalar> trace_stream(const Matrix<Scalar>& a, const Matrix<Scalar>& b, long k, long m_max)
{
    detail::check_pair(a, b);
    if (k < 0 || m_max < 0) throw std::invalid_argument("trace_stream: k and m_max must be >= 0");
    const Index n = a.rows();
    std::vector<Matrix<Scalar>> frontier(static_cast<std::size_t>(k + 1));
    frontier[0] = Matrix<Scalar>::Identity(n, n);
    for (long j = 1; j <= k; ++j) frontier[static_cast<std::size_t>(j)] = b * frontier[static_cast<std::size_t>(j - 1)];

    std::vector<Scalar> traces;
    traces.reserve(static_cast<std::size_t>(m_max + 1));
    traces.push_back(frontier.back().trace());
    for (long m = 1; m <= m_max; ++m) {
        frontier[0] = a * frontier[0];
        for (long j = 1; j <= k; ++j) {
            const auto u = static_cast<std::size_t>(j);
            Matrix<Scalar> next = a * frontier[u];
            next.noalias() += b * frontier[u - 1];
            frontier[u] = std::move(next);
        }
        traces.push_back(frontier.back().trace());
    }
    return traces;
}

/// kn x kn block upper bidiagonal Toeplitz matrix: A on the block diagonal,
/// B on the block superdiagonal.
template <typename Scalar>
struct BlockToeplitz {
    long k = 0;
    Index n = 0;
    Matrix<Scalar> body;

    /// 0-based block (i, j) of `m`, which must have the same block layout.
    Matrix<Scalar> block(const Matrix<Scalar>& m, long i, long j) const { return m.block(i * n, j * n, n, n); }
};

template <typename Scalar>
BlockToeplitz<Scalar> build_toeplitz(const Matrix<Scalar>& a, const Matrix<Scalar>& b, long k)
{
    detail::check_pair(a, b);
    if (k < 1) throw std::invalid_argument("build_toeplitz: k must be >= 1");
    const Index n = a.rows();
    BlockToeplitz<Scalar> t{k, n, Matrix<Scalar>::Zero(k * n, k * n)};
    for (long i = 0; i < k; ++i) {
        t.body.block(i * n, i * n, n, n) = a;
        if (i + 1 < k) t.body.block(i * n, (i + 1) * n, n, n) = b;
    }
    return t;
}

/// m-th power by repeated squaring.
template <typename Scalar>
Matrix<Scalar> matrix_power(const Matrix<Scalar>& m, long exponent)
{
    if (exponent < 0) throw std::invalid_argument("matrix_power: negative exponent");
    Matrix<Scalar> result = Matrix<Scalar>::Identity(m.rows(), m.cols());
    Matrix<Scalar> base = m;
    bool have_result = false;
    while (exponent > 0) {
        if (exponent & 1) {
            result = have_result ? Matrix<Scalar>(result * base) : base;
            have_result = true;
        }
        exponent >>= 1;
        if (exponent > 0) base = base * base;
    }
    return result;
}

/// First block row of T_k(A,B)^m; entry j (0-based) is S_{m-j, j}.
template <typename Scalar>
std::vector<Matrix<Scalar>> toeplitz_power_row(const Matrix<Scalar>& a, const Matrix<Scalar>& b, long m, long k)
{
    if (m < 0) throw std::invalid_argument("toeplitz_power_row: m must be >= 0");
    const BlockToeplitz<Scalar> t = build_toeplitz(a, b, k);
    const Matrix<Scalar> power = matrix_power(t.body, m);
    std::vector<Matrix<Scalar>> row;
    row.reserve(static_cast<std::size_t>(k));
    for (long j = 0; j < k; ++j) row.push_back(t.block(power, 0, j));
    return row;
}

/// S_{m-k+1, k-1}(A,B) read off block (1,k) of T_k(A,B)^m; zero when m < k-1.
template <typename Scalar>
Matrix<Scalar> s_from_toeplitz(const Matrix<Scalar>& a, const Matrix<Scalar>& b, long m, long k)
{
    return toeplitz_power_row(a, b, m, k).back();
}

/// Truncated matrix power series; coefficients[j] multiplies t^j and every
/// coefficient through truncation_order() is exact.
template <typename Scalar>
struct MatrixSeries {
    std::vector<Matrix<Scalar>> coefficients;

    long truncation_order() const { return static_cast<long>(coefficients.size()) - 1; }
    const Matrix<Scalar>& operator[](long j) const { return coefficients.at(static_cast<std::size_t>(j)); }
};

/// (I - tA)^{-1} = sum_j t^j A^j through t^order.
template <typename Scalar>
MatrixSeries<Scalar> neumann_series(const Matrix<Scalar>& a, long order)
{
    if (order < 0) throw std::invalid_argument("neumann_series: order must be >= 0");
    MatrixSeries<Scalar> s;
    s.coefficients.reserve(static_cast<std::size_t>(order + 1));
    s.coefficients.push_back(Matrix<Scalar>::Identity(a.rows(), a.cols()));
    for (long j = 1; j <= order; ++j) s.coefficients.push_back(a * s.coefficients.back());
    return s;
}

/// Cauchy product x*y truncated at min(order, both truncation orders).
template <typename Scalar>
MatrixSeries<Scalar> truncated_product(const MatrixSeries<Scalar>& x, const MatrixSeries<Scalar>& y, long order)
{
    order = std::min({order, x.truncation_order(), y.truncation_order()});
    MatrixSeries<Scalar> out;
    const Index n = x[0].rows();
    for (long j = 0; j <= order; ++j) {
        Matrix<Scalar> c = Matrix<Scalar>::Zero(n, n);
        for (long i = 0; i <= j; ++i) c.noalias() += x[i] * y[j - i];
        out.coefficients.push_back(std::move(c));
    }
    return out;
}

/// Series of (I - tA)^{-1} (B (I - tA)^{-1})^{k-1} through t^order; the t^j
/// coefficient is S_{j, k-1}(A,B).
template <typename Scalar>
MatrixSeries<Scalar> resolvent_series(const Matrix<Scalar>& a, const Matrix<Scalar>& b, long k, long order)
{
    detail::check_pair(a, b);
    if (k < 1) throw std::invalid_argument("resolvent_series: k must be >= 1");
    const MatrixSeries<Scalar> neumann = neumann_series(a, order);
    MatrixSeries<Scalar> b_neumann;
    for (const auto& c : neumann.coefficients) b_neumann.coefficients.push_back(b * c);
    MatrixSeries<Scalar> result = neumann;
    for (long i = 1; i < k; ++i) result = truncated_product(result, b_neumann, order);
    return result;
}

/// S_{p,q}(A,B) through the selected engine.
ExactMatrix s_coeff(const HermitianMatrix& a, const HermitianMatrix& b, long p, long q, Engine engine = Engine::recursive);

/// Tr S_{p,q}(A,B), real for hermitian inputs.
Rational trace_coeff(const HermitianMatrix& a, const HermitianMatrix& b, long p, long q,
                     Engine engine = Engine::recursive);

}  // namespace bmv
