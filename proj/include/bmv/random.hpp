#pragma once

// Seeded, platform-independent generation of exact test instances.

#include "bmv/matrix.hpp"

#include <cstdint>
#include <random>

namespace bmv {

/// splitmix64 mix of (seed, stream); used to derive independent sub-seeds.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

/// Deterministic integer draws. Uses raw mt19937_64 output with modular
/// reduction so results do not depend on the standard library's
/// distribution implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform-ish integer in [lo, hi].
    long draw(long lo, long hi);

    /// num/den with num in [-magnitude, magnitude], den in [1, magnitude].
    Rational rational(long magnitude);

private:
    std::mt19937_64 engine_;
};

/// rows x cols matrix with independent Gaussian-rational entries (both parts
/// drawn by Rng::rational).
ExactMatrix random_gaussian_matrix(Index rows, Index cols, std::uint64_t seed, long magnitude);

/// G * G^*, hermitian and PSD by construction.
HermitianMatrix gram(const ExactMatrix& g);

HermitianMatrix random_psd(Index n, std::uint64_t seed, long magnitude);

/// Random PSD matrix whose rows/columns in `zero_rows` vanish: the Gram
/// factor has those rows zeroed.
HermitianMatrix random_psd_with_zero_rows(Index n, std::span<const Index> zero_rows, std::uint64_t seed, long magnitude);

struct HermitianPair {
    HermitianMatrix a;
    HermitianMatrix b;
};

/// PSD pair with A*B == 0 exactly: a random basis is orthogonalized exactly
/// (unnormalized Gram-Schmidt) and split between the two matrices, which are
/// positive combinations of the corresponding rank-one projectors. n >= 2.
HermitianPair random_zero_product_pair(Index n, std::uint64_t seed, long magnitude);

}  // namespace bmv
