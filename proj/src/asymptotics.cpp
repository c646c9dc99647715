#include "bmv/asymptotics.hpp"

#include "bmv/engines.hpp"
#include "bmv/errors.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <complex>
#include <stdexcept>

namespace bmv {

namespace {

void require_psd(const HermitianMatrix& m, std::string_view name)
{
    if (auto minor = find_negative_minor(m))
        throw std::invalid_argument(std::string(name) + " is not PSD: " + describe(*minor));
}

Rational power(const Rational& base, long e)
{
    Rational r = 1;
    for (long i = 0; i < e; ++i) r *= base;
    return r;
}

}  // namespace

std::string_view to_string(TraceClass c) { return c == TraceClass::TracePositive ? "TracePositive" : "TraceZero"; }

ZeroProductResult zero_product_check(const HermitianMatrix& a, const HermitianMatrix& b, long sample_max)
{
    if (a.size() != b.size()) throw std::invalid_argument("dimension mismatch between A and B");
    require_psd(a, "A");
    require_psd(b, "B");
    const ExactMatrix product = a.matrix() * b.matrix();
    ZeroProductResult result{TraceClass::TracePositive, real_trace(product)};
    if (result.trace_ab.sign() > 0) return result;
    if (result.trace_ab.sign() < 0)
        throw InternalConsistencyError("Tr AB < 0 for PSD A, B: " + to_string(result.trace_ab));

    result.classification = TraceClass::TraceZero;
    if (!is_zero_matrix(product)) throw InternalConsistencyError("Tr AB = 0 but AB != 0 for PSD A, B");
    const auto table = s_table_recursive(a.matrix(), b.matrix(), sample_max, sample_max);
    for (long m = 1; m <= sample_max; ++m)
        for (long k = 1; k <= sample_max; ++k)
            if (!table.trace(m, k).is_zero())
                throw InternalConsistencyError("AB = 0 but Tr S_{" + std::to_string(m) + "," + std::to_string(k) +
                                               "} = " + to_string(table.trace(m, k)));
    result.product_zero_verified = true;
    result.sampled_max = sample_max;
    return result;
}

DiagonalPair::DiagonalPair(std::vector<Rational> a_diagonal, HermitianMatrix b) : a_(std::move(a_diagonal)), b_(std::move(b))
{
    if (static_cast<Index>(a_.size()) != b_.size()) throw std::invalid_argument("diagonal length does not match B");
    for (std::size_t i = 0; i < a_.size(); ++i) {
        if (a_[i].sign() < 0) throw std::invalid_argument("diagonal of A must be nonnegative");
        if (i > 0 && a_[i] > a_[i - 1]) throw std::invalid_argument("diagonal of A must be nonincreasing");
    }
    require_psd(b_, "B");
}

DiagonalPair DiagonalPair::from_matrices(const HermitianMatrix& a, HermitianMatrix b)
{
    std::vector<Rational> diag;
    for (Index i = 0; i < a.size(); ++i)
        for (Index j = 0; j < a.size(); ++j)
            if (i != j && !a(i, j).is_zero())
                throw std::invalid_argument("A must be diagonal with a_1 >= ... >= a_n >= 0");
    for (Index i = 0; i < a.size(); ++i) diag.push_back(a(i, i).real());
    return {std::move(diag), std::move(b)};
}

Rational DiagonalPair::trace_ab() const
{
    Rational t = 0;
    for (std::size_t i = 0; i < a_.size(); ++i) t += a_[i] * b_(static_cast<Index>(i), static_cast<Index>(i)).real();
    return t;
}

LeadingIndex leading_index(const DiagonalPair& pair)
{
    const auto& a = pair.a_diagonal();
    const Index n = pair.size();
    Index p = 0;
    while (p < n && (a[static_cast<std::size_t>(p)] * pair.b()(p, p).real()).sign() <= 0) ++p;
    if (p == n) throw std::domain_error("Tr AB = 0: no leading index; use zero_product_check");
    Index l = 1;
    while (p + l < n && a[static_cast<std::size_t>(p + l)] == a[static_cast<std::size_t>(p)]) ++l;
    return {p + 1, l};
}

HermitianMatrix leading_block(const DiagonalPair& pair)
{
    const LeadingIndex lead = leading_index(pair);
    std::vector<Index> idx;
    for (Index i = 0; i < lead.l; ++i) idx.push_back(lead.p - 1 + i);
    return pair.b().principal_submatrix(idx);
}

Rational asymptotic_limit(const DiagonalPair& pair, long k)
{
    if (k < 1) throw std::invalid_argument("asymptotic_limit: k must be >= 1");
    const LeadingIndex lead = leading_index(pair);
    const HermitianMatrix c = leading_block(pair);
    Rational limit = real_trace(matrix_power(c.matrix(), k));
    const Rational bpp = pair.b()(lead.p - 1, lead.p - 1).real();
    if (limit < power(bpp, k) || power(bpp, k).sign() <= 0)
        throw InternalConsistencyError("Tr C^k < b_pp^k for a PSD leading block");
    return limit;
}

RatioSequence ratio_sequence(const DiagonalPair& pair, long k, long m_max)
{
    if (k < 1) throw std::invalid_argument("ratio_sequence: k must be >= 1");
    if (m_max < 1) throw std::invalid_argument("ratio_sequence: m_max must be >= 1");
    const LeadingIndex lead = leading_index(pair);
    const Rational& ap = pair.a_diagonal()[static_cast<std::size_t>(lead.p - 1)];
    const std::vector<Gaussian> traces = trace_stream(pair.a().matrix(), pair.b().matrix(), k, m_max);
    RatioSequence out;
    out.reserve(static_cast<std::size_t>(m_max));
    Rational ap_power = 1;
    for (long m = 1; m <= m_max; ++m) {
        ap_power *= ap;
        const Gaussian& t = traces[static_cast<std::size_t>(m)];
        if (!t.is_real()) throw InternalConsistencyError("non-real trace for hermitian inputs");
        out.emplace_back(m, t.real() / (ap_power * Rational(binomial(m + k, k))));
    }
    return out;
}

std::optional<long> estimate_N(const RatioSequence& ratios, const Rational& b_pp, const Rational& epsilon, long k)
{
    if (epsilon.sign() <= 0 || epsilon >= 1) throw std::invalid_argument("epsilon must satisfy 0 < epsilon < 1");
    const Rational threshold = (Rational(1) - epsilon) * power(b_pp, k);
    std::optional<long> best;
    for (auto it = ratios.rbegin(); it != ratios.rend(); ++it) {
        if (it->second < threshold) break;
        best = it->first;
    }
    return best;
}

std::optional<long> estimate_N(const DiagonalPair& pair, const Rational& epsilon, long k, long m_max)
{
    if (epsilon.sign() <= 0 || epsilon >= 1) throw std::invalid_argument("epsilon must satisfy 0 < epsilon < 1");
    const LeadingIndex lead = leading_index(pair);
    return estimate_N(ratio_sequence(pair, k, m_max), pair.b()(lead.p - 1, lead.p - 1).real(), epsilon, k);
}

AsymptoticReport asymptotic_report(const DiagonalPair& pair, long k, const Rational& epsilon, long m_max)
{
    if (epsilon.sign() <= 0 || epsilon >= 1) throw std::invalid_argument("epsilon must satisfy 0 < epsilon < 1");
    if (k < 1) throw std::invalid_argument("k must be >= 1");
    AsymptoticReport report;
    report.k = k;
    report.epsilon = epsilon;
    report.m_max = m_max;
    const ZeroProductResult zp = zero_product_check(pair.a(), pair.b());
    report.classification = zp.classification;
    report.trace_ab = zp.trace_ab;
    if (zp.classification == TraceClass::TraceZero) return report;

    report.leading = leading_index(pair);
    report.block = leading_block(pair);
    report.limit_value = asymptotic_limit(pair, k);
    report.ratios = ratio_sequence(pair, k, m_max);
    const Index p = report.leading->p - 1;
    report.estimated_N = estimate_N(report.ratios, pair.b()(p, p).real(), epsilon, k);
    return report;
}

Rational rationalize(double x, long max_denominator)
{
    if (!std::isfinite(x)) throw std::invalid_argument("rationalize: non-finite value");
    if (max_denominator < 1) throw std::invalid_argument("rationalize: max_denominator must be >= 1");
    const bool negative = x < 0;
    double f = std::fabs(x);
    if (f > 1e15) throw std::invalid_argument("rationalize: value out of range");
    // Continued-fraction convergents h/k.
    long long h0 = 0, h1 = 1, k0 = 1, k1 = 0;
    for (int iter = 0; iter < 64; ++iter) {
        const double a = std::floor(f);
        const auto ai = static_cast<long long>(a);
        const long long h2 = ai * h1 + h0;
        const long long k2 = ai * k1 + k0;
        if (k2 > max_denominator) break;
        h0 = h1, h1 = h2, k0 = k1, k1 = k2;
        const double frac = f - a;
        if (frac < 1e-15) break;
        f = 1.0 / frac;
    }
    if (k1 == 0) return 0;
    Rational r{Integer(h1), Integer(k1)};
    return negative ? Rational(-r) : r;
}

namespace {

Eigen::MatrixXcd to_complex(const ExactMatrix& m)
{
    Eigen::MatrixXcd out(m.rows(), m.cols());
    for (Index i = 0; i < m.rows(); ++i)
        for (Index j = 0; j < m.cols(); ++j)
            out(i, j) = {m(i, j).real().convert_to<double>(), m(i, j).imag().convert_to<double>()};
    return out;
}

}  // namespace

double largest_eigenvalue(const HermitianMatrix& m)
{
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(to_complex(m.matrix()), Eigen::EigenvaluesOnly);
    return solver.eigenvalues().maxCoeff();
}

FloatDiagonalization float_diagonalize(const HermitianMatrix& a, const HermitianMatrix& b, long max_denominator)
{
    if (a.size() != b.size()) throw std::invalid_argument("dimension mismatch between A and B");
    const Index n = a.size();
    const Eigen::MatrixXcd af = to_complex(a.matrix());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(af);
    // Eigen sorts ascending; reverse to a_1 >= ... >= a_n.
    Eigen::MatrixXcd u = solver.eigenvectors().rowwise().reverse();
    Eigen::VectorXd values = solver.eigenvalues().reverse();

    FloatDiagonalization out;
    out.roundtrip_error = (u * values.cast<std::complex<double>>().asDiagonal() * u.adjoint() - af).cwiseAbs().maxCoeff();

    std::vector<Rational> diag;
    for (Index i = 0; i < n; ++i) {
        Rational v = rationalize(std::max(values(i), 0.0), max_denominator);
        if (!diag.empty() && v > diag.back()) v = diag.back();
        diag.push_back(std::move(v));
    }
    const Eigen::MatrixXcd bf = u.adjoint() * to_complex(b.matrix()) * u;
    ExactMatrix rounded(n, n);
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j)
            rounded(i, j) = Gaussian(rationalize(bf(i, j).real(), max_denominator),
                                     rationalize(bf(i, j).imag(), max_denominator));
    ExactMatrix herm = (rounded + conj_transpose(rounded)) * Gaussian(Rational(Integer(1), Integer(2)));
    HermitianMatrix hb(std::move(herm));

    out.warning = "A was diagonalized in floating point and B conjugated into its eigenbasis; entries were rounded to "
                  "denominators <= " + std::to_string(max_denominator) + ", so every result is approximate";
    if (auto minor = find_negative_minor(hb)) {
        out.warning += "; rounded B is not PSD (" + describe(*minor) + ")";
        return out;
    }
    out.pair.emplace(std::move(diag), std::move(hb));
    return out;
}

}  // namespace bmv
