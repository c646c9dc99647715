#include "bmv/matrix.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace bmv {

Gaussian determinant(const ExactMatrix& m)
{
    if (m.rows() != m.cols()) throw std::invalid_argument("determinant: matrix is not square");
    ExactMatrix work = m;
    const Index n = work.rows();
    Gaussian det(1);
    for (Index col = 0; col < n; ++col) {
        Index pivot = col;
        while (pivot < n && work(pivot, col).is_zero()) ++pivot;
        if (pivot == n) return Gaussian(0);
        if (pivot != col) {
            work.row(pivot).swap(work.row(col));
            det = -det;
        }
        const Gaussian& p = work(col, col);
        det *= p;
        for (Index r = col + 1; r < n; ++r) {
            if (work(r, col).is_zero()) continue;
            const Gaussian factor = work(r, col) / p;
            for (Index c = col + 1; c < n; ++c)
                if (!work(col, c).is_zero()) work(r, c) -= factor * work(col, c);
            work(r, col) = Gaussian(0);
        }
    }
    return det;
}

Rational real_trace(const ExactMatrix& m)
{
    const Gaussian t = m.trace();
    if (!t.is_real()) throw std::logic_error("trace is not real: " + to_string(t));
    return t.real();
}

HermitianMatrix::HermitianMatrix(ExactMatrix m) : m_(std::move(m))
{
    if (m_.rows() == 0 || m_.rows() != m_.cols()) throw std::invalid_argument("hermitian matrix must be square and nonempty");
    if (!is_hermitian(m_)) throw std::invalid_argument("matrix is not hermitian");
}

HermitianMatrix HermitianMatrix::identity(Index n) { return HermitianMatrix(ExactMatrix::Identity(n, n)); }

HermitianMatrix HermitianMatrix::diagonal(std::span<const Rational> values)
{
    const auto n = static_cast<Index>(values.size());
    ExactMatrix m = ExactMatrix::Zero(n, n);
    for (Index i = 0; i < n; ++i) m(i, i) = Gaussian(values[static_cast<std::size_t>(i)]);
    return HermitianMatrix(std::move(m));
}

HermitianMatrix HermitianMatrix::principal_submatrix(std::span<const Index> indices) const
{
    const auto k = static_cast<Index>(indices.size());
    ExactMatrix sub(k, k);
    for (Index i = 0; i < k; ++i) {
        for (Index j = 0; j < k; ++j) {
            const Index r = indices[static_cast<std::size_t>(i)];
            const Index c = indices[static_cast<std::size_t>(j)];
            if (r < 0 || r >= size() || c < 0 || c >= size()) throw std::out_of_range("principal submatrix index out of range");
            sub(i, j) = m_(r, c);
        }
    }
    return HermitianMatrix(std::move(sub));
}

Rational principal_minor(const HermitianMatrix& m, std::span<const Index> indices)
{
    if (indices.empty()) throw std::invalid_argument("principal_minor: empty index set");
    for (Index i : indices)
        if (i < 0 || i >= m.size()) throw std::out_of_range("principal_minor: index " + std::to_string(i) + " out of range");
    std::vector<Index> sorted(indices.begin(), indices.end());
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw std::invalid_argument("principal_minor: repeated index");
    const Gaussian d = determinant(m.principal_submatrix(sorted).matrix());
    if (!d.is_real()) throw std::logic_error("principal minor of hermitian matrix is not real");
    return d.real();
}

std::optional<NegativeMinor> find_negative_minor(const HermitianMatrix& m)
{
    const Index n = m.size();
    if (n > 20) throw std::invalid_argument("find_negative_minor: dimension too large for minor enumeration");
    const std::uint64_t subsets = std::uint64_t{1} << n;
    std::vector<Index> idx;
    for (std::uint64_t mask = 1; mask < subsets; ++mask) {
        idx.clear();
        for (Index i = 0; i < n; ++i)
            if (mask & (std::uint64_t{1} << i)) idx.push_back(i);
        Rational v = principal_minor(m, idx);
        if (v.sign() < 0) return NegativeMinor{idx, std::move(v)};
    }
    return std::nullopt;
}

bool is_psd(const HermitianMatrix& m) { return !find_negative_minor(m).has_value(); }

bool is_psd(const ExactMatrix& m)
{
    if (!is_hermitian(m)) throw std::invalid_argument("is_psd: matrix is not hermitian");
    return is_psd(HermitianMatrix(m));
}

std::string describe(const NegativeMinor& minor)
{
    std::string s = "principal minor on indices {";
    for (std::size_t i = 0; i < minor.indices.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(minor.indices[i] + 1);
    }
    s += "} is " + to_string(minor.value) + " < 0";
    return s;
}

}  // namespace bmv
