#pragma once

// Exact scalars: arbitrary-precision rationals and Gaussian rationals
// (complex numbers with rational real and imaginary parts), plus the
// Eigen NumTraits glue that lets them sit inside Eigen::Matrix.

#include <boost/multiprecision/gmp.hpp>

#include <Eigen/Core>

#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>

namespace bmv {

using Integer = boost::multiprecision::number<boost::multiprecision::gmp_int,
                                              boost::multiprecision::et_off>;

/// Arbitrary-precision rational, always kept in lowest terms with a positive
/// denominator (GMP canonicalizes after every operation).
using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;

/// Real scalar quantities in this library are exact rationals.
using ExactScalar = Rational;

/// Parses "p", "-p", "+p" or "p/q" with decimal digits only.
/// Throws std::invalid_argument on malformed input or zero denominator.
Rational parse_rational(std::string_view text);

/// Canonical "num/den" form; the denominator is always printed ("12/1").
std::string to_string(const Rational& value);

/// Scientific rendering with `significant` digits, rounded half-to-even
/// from the exact value, e.g. "1.20000000000e+01".
std::string approx_decimal(const Rational& value, int significant = 12);

/// Binomial coefficient C(n, k) as an exact integer; zero when k < 0 or k > n.
Integer binomial(long n, long k);

/// Complex number with exact rational parts.
class Gaussian {
public:
    Gaussian() = default;
    Gaussian(int re) : re_(re) {}  // NOLINT(google-explicit-constructor): Eigen builds Scalar(0), Scalar(1)
    Gaussian(long re) : re_(re) {}  // NOLINT(google-explicit-constructor)
    Gaussian(Rational re) : re_(std::move(re)) {}  // NOLINT(google-explicit-constructor)
    Gaussian(Rational re, Rational im) : re_(std::move(re)), im_(std::move(im)) {}

    const Rational& real() const { return re_; }
    const Rational& imag() const { return im_; }

    bool is_zero() const { return re_.is_zero() && im_.is_zero(); }
    bool is_real() const { return im_.is_zero(); }

    Gaussian& operator+=(const Gaussian& rhs);
    Gaussian& operator-=(const Gaussian& rhs);
    Gaussian& operator*=(const Gaussian& rhs);
    Gaussian& operator/=(const Gaussian& rhs);

    friend Gaussian operator+(Gaussian lhs, const Gaussian& rhs) { return lhs += rhs; }
    friend Gaussian operator-(Gaussian lhs, const Gaussian& rhs) { return lhs -= rhs; }
    friend Gaussian operator*(const Gaussian& lhs, const Gaussian& rhs);
    friend Gaussian operator/(Gaussian lhs, const Gaussian& rhs) { return lhs /= rhs; }
    friend Gaussian operator-(const Gaussian& v) { return {-v.re_, -v.im_}; }

    friend bool operator==(const Gaussian& lhs, const Gaussian& rhs)
    {
        return lhs.re_ == rhs.re_ && lhs.im_ == rhs.im_;
    }
    friend bool operator!=(const Gaussian& lhs, const Gaussian& rhs) { return !(lhs == rhs); }

private:
    Rational re_;
    Rational im_;
};

inline Gaussian conj(const Gaussian& v) { return {v.real(), -v.imag()}; }

/// |v|^2 = re^2 + im^2, exact and nonnegative.
inline Rational norm(const Gaussian& v) { return v.real() * v.real() + v.imag() * v.imag(); }

/// "p/q" for real values, "p/q+r/si" style otherwise (human-readable only).
std::string to_string(const Gaussian& value);

std::ostream& operator<<(std::ostream& os, const Gaussian& value);

}  // namespace bmv

namespace Eigen {

template <>
struct NumTraits<bmv::Gaussian> : GenericNumTraits<bmv::Gaussian> {
    using Real = bmv::Gaussian;
    using NonInteger = bmv::Gaussian;
    using Nested = bmv::Gaussian;
    using Literal = bmv::Gaussian;

    enum {
        // Conjugation is done explicitly (bmv::conj_transpose); Eigen must not
        // route the type through std::complex machinery.
        IsComplex = 0,
        IsInteger = 0,
        IsSigned = 1,
        RequireInitialization = 1,
        ReadCost = 8,
        AddCost = 32,
        MulCost = 128
    };

    static inline Real epsilon() { return Real(0); }
    static inline Real dummy_precision() { return Real(0); }
    static inline int digits10() { return 0; }
};

}  // namespace Eigen
