#pragma once

// Large-m behaviour of Tr S_{m,k}(A,B) for PSD A = diag(a_1 >= ... >= a_n >= 0)
// and PSD B. With p the first index where a_p b_pp > 0 and l the length of
// the run a_p = ... = a_{p+l-1}, the normalized coefficient
//     Tr S_{m,k} / (a_p^m C(m+k, k))
// tends to Tr C^k, C = B[p..p+l-1, p..p+l-1]. If Tr AB = 0 then AB = 0 and
// every Tr S_{m,k} with m, k >= 1 vanishes.

#include "bmv/matrix.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace bmv {

enum class TraceClass { TracePositive, TraceZero };

std::string_view to_string(TraceClass c);

struct ZeroProductResult {
    TraceClass classification;
    Rational trace_ab;
    /// Only meaningful for TraceZero: AB == 0 and Tr S_{m,k} == 0 for
    /// 1 <= m, k <= sampled_max were verified exactly.
    bool product_zero_verified = false;
    long sampled_max = 0;
};

/// Classifies a PSD pair by Tr AB. For Tr AB = 0 it verifies AB = 0 and the
/// vanishing of Tr S_{m,k} for 1 <= m, k <= sample_max; any failure raises
/// InternalConsistencyError. Non-PSD input raises std::invalid_argument.
ZeroProductResult zero_product_check(const HermitianMatrix& a, const HermitianMatrix& b, long sample_max = 4);

/// A given as its sorted nonnegative diagonal, B PSD.
class DiagonalPair {
public:
    DiagonalPair(std::vector<Rational> a_diagonal, HermitianMatrix b);

    /// Requires `a` to be diagonal, real, nonincreasing and nonnegative.
    static DiagonalPair from_matrices(const HermitianMatrix& a, HermitianMatrix b);

    const std::vector<Rational>& a_diagonal() const { return a_; }
    const HermitianMatrix& b() const { return b_; }
    HermitianMatrix a() const { return HermitianMatrix::diagonal(a_); }
    Index size() const { return b_.size(); }

    /// Tr AB = sum_i a_i b_ii.
    Rational trace_ab() const;

private:
    std::vector<Rational> a_;
    HermitianMatrix b_;
};

/// Leading index p (1-based) and the length l of the tie a_p = ... = a_{p+l-1}.
struct LeadingIndex {
    Index p = 0;
    Index l = 0;
};

/// Throws std::domain_error when Tr AB = 0 (use zero_product_check).
LeadingIndex leading_index(const DiagonalPair& pair);

HermitianMatrix leading_block(const DiagonalPair& pair);

/// Exact Tr C^k. Checks Tr C^k >= b_pp^k > 0.
Rational asymptotic_limit(const DiagonalPair& pair, long k);

using RatioSequence = std::vector<std::pair<long, Rational>>;

/// Tr S_{m,k} / (a_p^m C(m+k,k)) for m = 1..m_max via the streaming engine.
RatioSequence ratio_sequence(const DiagonalPair& pair, long k, long m_max);

/// Smallest m* in [1, m_max] such that ratio(m) >= (1 - epsilon) b_pp^k for
/// every m in [m*, m_max] (equivalently the lower bound
/// Tr S_{m,k} >= (1-eps) b_pp^k a_p^m C(m+k,k)); nullopt if none.
/// This is an empirical certificate over the finite horizon only.
std::optional<long> estimate_N(const DiagonalPair& pair, const Rational& epsilon, long k, long m_max);

/// Same, from an already computed ratio sequence.
std::optional<long> estimate_N(const RatioSequence& ratios, const Rational& b_pp, const Rational& epsilon, long k);

struct AsymptoticReport {
    TraceClass classification = TraceClass::TracePositive;
    Rational trace_ab;
    long k = 0;
    Rational epsilon;
    long m_max = 0;
    // Populated for TracePositive only.
    std::optional<LeadingIndex> leading;
    std::optional<HermitianMatrix> block;
    std::optional<Rational> limit_value;
    RatioSequence ratios;
    std::optional<long> estimated_N;
};

AsymptoticReport asymptotic_report(const DiagonalPair& pair, long k, const Rational& epsilon, long m_max);

// Floating-point helpers (diagnostics only, never part of exact checks).

/// Best rational approximation with denominator <= max_denominator.
Rational rationalize(double x, long max_denominator);

/// Largest eigenvalue of a hermitian matrix in double precision.
double largest_eigenvalue(const HermitianMatrix& m);

struct FloatDiagonalization {
    std::optional<DiagonalPair> pair;
    double roundtrip_error = 0.0;
    std::string warning;
};

/// Eigendecomposes A in double precision, conjugates B into A's eigenbasis
/// and rounds both back to rationals. The result is approximate; `pair` is
/// empty (and `warning` explains why) when the rounded B is not PSD.
FloatDiagonalization float_diagonalize(const HermitianMatrix& a, const HermitianMatrix& b,
                                       long max_denominator = 1'000'000);

}  // namespace bmv
