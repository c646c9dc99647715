#include "bmv/random.hpp"

#include <stdexcept>
#include <vector>

namespace bmv {

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream)
{
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

long Rng::draw(long lo, long hi)
{
    if (hi < lo) throw std::invalid_argument("Rng::draw: empty range");
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<long>(engine_() % span);
}

Rational Rng::rational(long magnitude)
{
    if (magnitude < 1) throw std::invalid_argument("magnitude must be >= 1");
    const long num = draw(-magnitude, magnitude);
    const long den = draw(1, magnitude);
    return Rational(Integer(num), Integer(den));
}

ExactMatrix random_gaussian_matrix(Index rows, Index cols, std::uint64_t seed, long magnitude)
{
    Rng rng(seed);
    ExactMatrix g(rows, cols);
    for (Index i = 0; i < rows; ++i)
        for (Index j = 0; j < cols; ++j) {
            Rational re = rng.rational(magnitude);
            Rational im = rng.rational(magnitude);
            g(i, j) = Gaussian(std::move(re), std::move(im));
        }
    return g;
}

HermitianMatrix gram(const ExactMatrix& g)
{
    ExactMatrix m = g * conj_transpose(g);
    return HermitianMatrix(std::move(m));
}

HermitianMatrix random_psd(Index n, std::uint64_t seed, long magnitude)
{
    if (n < 1) throw std::invalid_argument("random_psd: n must be >= 1");
    return gram(random_gaussian_matrix(n, n, seed, magnitude));
}

HermitianMatrix random_psd_with_zero_rows(Index n, std::span<const Index> zero_rows, std::uint64_t seed, long magnitude)
{
    if (n < 1) throw std::invalid_argument("random_psd_with_zero_rows: n must be >= 1");
    ExactMatrix g = random_gaussian_matrix(n, n, seed, magnitude);
    for (Index r : zero_rows) {
        if (r < 0 || r >= n) throw std::out_of_range("random_psd_with_zero_rows: row out of range");
        g.row(r).setZero();
    }
    return gram(g);
}

namespace {

Gaussian inner(const ExactMatrix& u, const ExactMatrix& v)  // u^* v for column vectors
{
    Gaussian s(0);
    for (Index i = 0; i < u.rows(); ++i) s += conj(u(i, 0)) * v(i, 0);
    return s;
}

}  // namespace

HermitianPair random_zero_product_pair(Index n, std::uint64_t seed, long magnitude)
{
    if (n < 2) throw std::invalid_argument("random_zero_product_pair: n must be >= 2");
    Rng rng(seed);
    std::vector<ExactMatrix> basis;
    std::uint64_t stream = 0;
    while (static_cast<Index>(basis.size()) < n) {
        ExactMatrix v = random_gaussian_matrix(n, 1, derive_seed(seed, stream++), magnitude);
        for (const auto& q : basis) {
            const Gaussian coeff = inner(q, v) / inner(q, q);
            v -= q * coeff;
        }
        if (!is_zero_matrix(v)) basis.push_back(std::move(v));
    }
    const long split = rng.draw(1, n - 1);
    ExactMatrix a = ExactMatrix::Zero(n, n);
    ExactMatrix b = ExactMatrix::Zero(n, n);
    for (Index i = 0; i < n; ++i) {
        // Weight 0 is allowed past the first vector of each side, so
        // rank-deficient pieces appear too.
        const long lo = (i == 0 || i == split) ? 1 : 0;
        const Gaussian w(Rational(Integer(rng.draw(lo, magnitude)), Integer(rng.draw(1, magnitude))));
        ExactMatrix projector = basis[static_cast<std::size_t>(i)] * conj_transpose(basis[static_cast<std::size_t>(i)]);
        (i < split ? a : b) += projector * w;
    }
    return {HermitianMatrix(std::move(a)), HermitianMatrix(std::move(b))};
}

}  // namespace bmv
