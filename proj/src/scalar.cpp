#include "bmv/scalar.hpp"

#include <ostream>
#include <stdexcept>

namespace bmv {

namespace {

bool all_digits(std::string_view s)
{
    if (s.empty()) return false;
    for (char c : s)
        if (c < '0' || c > '9') return false;
    return true;
}

Integer pow10(long e)
{
    Integer r = 1;
    for (long i = 0; i < e; ++i) r *= 10;
    return r;
}

}  // namespace

Rational parse_rational(std::string_view text)
{
    std::string_view body = text;
    bool negative = false;
    if (!body.empty() && (body.front() == '-' || body.front() == '+')) {
        negative = body.front() == '-';
        body.remove_prefix(1);
    }
    const auto slash = body.find('/');
    const std::string_view num = body.substr(0, slash);
    const std::string_view den = slash == std::string_view::npos ? std::string_view("1") : body.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den))
        throw std::invalid_argument("malformed rational \"" + std::string(text) + "\"");
    Integer n{std::string(num)};
    Integer d{std::string(den)};
    if (d.is_zero()) throw std::invalid_argument("zero denominator in \"" + std::string(text) + "\"");
    if (negative) n = -n;
    return Rational(n, d);
}

std::string to_string(const Rational& value)
{
    return numerator(value).str() + "/" + denominator(value).str();
}

std::string approx_decimal(const Rational& value, int significant)
{
    if (significant < 1) throw std::invalid_argument("approx_decimal: significant digits must be >= 1");
    std::string mantissa(static_cast<std::size_t>(significant), '0');
    long exponent = 0;
    const bool negative = value.sign() < 0;
    if (!value.is_zero()) {
        const Rational x = negative ? Rational(-value) : value;
        Integer num = numerator(x);
        Integer den = denominator(x);
        // Estimate floor(log10(x)) from digit counts, then correct.
        exponent = static_cast<long>(num.str().size()) - static_cast<long>(den.str().size());
        auto below = [&](long e) {  // x < 10^e
            return e >= 0 ? num < den * pow10(e) : num * pow10(-e) < den;
        };
        while (below(exponent)) --exponent;
        while (!below(exponent + 1)) ++exponent;

        // scaled = x * 10^(significant-1-exponent) lies in [10^(s-1), 10^s)
        const long shift = significant - 1 - exponent;
        Integer sn = shift >= 0 ? num * pow10(shift) : num;
        Integer sd = shift >= 0 ? den : den * pow10(-shift);
        Integer q = sn / sd;
        Integer twice_rem = 2 * (sn - q * sd);
        if (twice_rem > sd || (twice_rem == sd && (q % 2) != 0)) q += 1;
        if (q == pow10(significant)) {
            q /= 10;
            ++exponent;
        }
        mantissa = q.str();
    }
    std::string out;
    if (negative) out += '-';
    out += mantissa[0];
    if (significant > 1) {
        out += '.';
        out += mantissa.substr(1);
    }
    out += 'e';
    out += exponent < 0 ? '-' : '+';
    const long mag = exponent < 0 ? -exponent : exponent;
    if (mag < 10) out += '0';
    out += std::to_string(mag);
    return out;
}

Integer binomial(long n, long k)
{
    if (k < 0 || n < 0 || k > n) return 0;
    if (k > n - k) k = n - k;
    Integer r = 1;
    for (long i = 1; i <= k; ++i) {
        r *= n - k + i;
        r /= i;
    }
    return r;
}

Gaussian& Gaussian::operator+=(const Gaussian& rhs)
{
    if (!rhs.re_.is_zero()) re_ += rhs.re_;
    if (!rhs.im_.is_zero()) im_ += rhs.im_;
    return *this;
}

Gaussian& Gaussian::operator-=(const Gaussian& rhs)
{
    if (!rhs.re_.is_zero()) re_ -= rhs.re_;
    if (!rhs.im_.is_zero()) im_ -= rhs.im_;
    return *this;
}

Gaussian operator*(const Gaussian& lhs, const Gaussian& rhs)
{
    if (lhs.is_zero() || rhs.is_zero()) return {};
    if (lhs.is_real() && rhs.is_real()) return Gaussian(lhs.re_ * rhs.re_);
    if (lhs.is_real()) return {lhs.re_ * rhs.re_, lhs.re_ * rhs.im_};
    if (rhs.is_real()) return {lhs.re_ * rhs.re_, lhs.im_ * rhs.re_};
    return {lhs.re_ * rhs.re_ - lhs.im_ * rhs.im_, lhs.re_ * rhs.im_ + lhs.im_ * rhs.re_};
}

Gaussian& Gaussian::operator*=(const Gaussian& rhs)
{
    *this = *this * rhs;
    return *this;
}

Gaussian& Gaussian::operator/=(const Gaussian& rhs)
{
    if (rhs.is_zero()) throw std::domain_error("Gaussian division by zero");
    if (rhs.is_real()) {
        re_ /= rhs.re_;
        im_ /= rhs.re_;
        return *this;
    }
    const Rational d = norm(rhs);
    *this = *this * conj(rhs);
    re_ /= d;
    im_ /= d;
    return *this;
}

std::string to_string(const Gaussian& value)
{
    if (value.is_real()) return to_string(value.real());
    return "(" + to_string(value.real()) + (value.imag().sign() < 0 ? "-" : "+") +
           to_string(abs(value.imag())) + "i)";
}

std::ostream& operator<<(std::ostream& os, const Gaussian& value) { return os << to_string(value); }

}  // namespace bmv
