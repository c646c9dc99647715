#pragma once

#include "bmv/scalar.hpp"

#include <Eigen/Core>

#include <complex>
#include <optional>
#include <span>
#include <vector>

namespace bmv {

using Index = Eigen::Index;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// Dense exact matrix over the Gaussian rationals.
using ExactMatrix = Matrix<Gaussian>;

inline double scalar_conj(double v) { return v; }
inline Gaussian scalar_conj(const Gaussian& v) { return conj(v); }
template <typename T>
std::complex<T> scalar_conj(const std::complex<T>& v)
{
    return std::conj(v);
}

template <typename Derived>
Matrix<typename Derived::Scalar> conj_transpose(const Eigen::MatrixBase<Derived>& m)
{
    using Scalar = typename Derived::Scalar;
    return m.transpose().unaryExpr([](const Scalar& v) { return scalar_conj(v); });
}

template <typename Derived>
bool is_hermitian(const Eigen::MatrixBase<Derived>& m)
{
    if (m.rows() != m.cols()) return false;
    for (Index j = 0; j < m.cols(); ++j)
        for (Index i = j; i < m.rows(); ++i)
            if (m(i, j) != scalar_conj(m(j, i))) return false;
    return true;
}

template <typename Derived>
bool is_zero_matrix(const Eigen::MatrixBase<Derived>& m)
{
    using Scalar = typename Derived::Scalar;
    for (Index j = 0; j < m.cols(); ++j)
        for (Index i = 0; i < m.rows(); ++i)
            if (m(i, j) != Scalar(0)) return false;
    return true;
}

/// Exact determinant by Gaussian elimination over the Gaussian rationals.
Gaussian determinant(const ExactMatrix& m);

/// Real part of the trace; throws std::logic_error if the trace is not real.
Rational real_trace(const ExactMatrix& m);

/// Square Gaussian-rational matrix with (i,j) == conj((j,i)); the diagonal is
/// therefore real. Construction validates the invariant.
class HermitianMatrix {
public:
    explicit HermitianMatrix(ExactMatrix m);

    static HermitianMatrix identity(Index n);
    static HermitianMatrix diagonal(std::span<const Rational> values);

    const ExactMatrix& matrix() const { return m_; }
    Index size() const { return m_.rows(); }
    const Gaussian& operator()(Index i, Index j) const { return m_(i, j); }

    /// Principal submatrix on the given (sorted, 0-based) indices.
    HermitianMatrix principal_submatrix(std::span<const Index> indices) const;

    friend bool operator==(const HermitianMatrix& a, const HermitianMatrix& b)
    {
        return a.size() == b.size() && a.m_ == b.m_;
    }

private:
    ExactMatrix m_;
};

/// Determinant of the principal submatrix on `indices` (0-based, any order,
/// no duplicates). Real for hermitian input. Throws std::out_of_range on an
/// invalid index and std::invalid_argument on an empty or repeated set.
Rational principal_minor(const HermitianMatrix& m, std::span<const Index> indices);

/// First principal minor (in bitmask order over all 2^n - 1 subsets) that is
/// negative, together with its value; nullopt when the matrix is PSD.
struct NegativeMinor {
    std::vector<Index> indices;
    Rational value;
};
std::optional<NegativeMinor> find_negative_minor(const HermitianMatrix& m);

bool is_psd(const HermitianMatrix& m);

/// Rejects non-hermitian input with std::invalid_argument.
bool is_psd(const ExactMatrix& m);

std::string describe(const NegativeMinor& minor);

}  // namespace bmv
