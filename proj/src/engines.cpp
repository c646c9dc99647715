#include "bmv/engines.hpp"

#include <array>
#include <utility>

namespace bmv {

namespace {

constexpr std::array<std::pair<Engine, std::string_view>, 5> kEngineNames{{
    {Engine::words, "words"},
    {Engine::recursive, "recursive"},
    {Engine::recursive_right, "recursive_right"},
    {Engine::toeplitz, "toeplitz"},
    {Engine::resolvent, "resolvent"},
}};

}  // namespace

std::string_view to_string(Engine engine)
{
    for (const auto& [e, name] : kEngineNames)
        if (e == engine) return name;
    return "unknown";
}

std::optional<Engine> parse_engine(std::string_view name)
{
    for (const auto& [e, n] : kEngineNames)
        if (n == name) return e;
    return std::nullopt;
}

long word_count(long p, long q, long cap)
{
    if (p < 0 || q < 0) return 0;
    const Integer c = binomial(p + q, q);
    return c > cap ? cap + 1 : c.convert_to<long>();
}

ExactMatrix s_coeff(const HermitianMatrix& a, const HermitianMatrix& b, long p, long q, Engine engine)
{
    const ExactMatrix& am = a.matrix();
    const ExactMatrix& bm = b.matrix();
    detail::check_pair(am, bm);
    if (p < 0 || q < 0) return ExactMatrix::Zero(am.rows(), am.rows());
    switch (engine) {
    case Engine::words:
        return s_words(am, bm, p, q);
    case Engine::recursive:
        return s_table_recursive(am, bm, p, q).at(p, q);
    case Engine::recursive_right:
        return s_table_recursive_right(am, bm, p, q).at(p, q);
    case Engine::toeplitz:
        return s_from_toeplitz(am, bm, p + q, q + 1);
    case Engine::resolvent:
        return resolvent_series(am, bm, q + 1, p)[p];
    }
    throw std::invalid_argument("unknown engine");
}

Rational trace_coeff(const HermitianMatrix& a, const HermitianMatrix& b, long p, long q, Engine engine)
{
    return real_trace(s_coeff(a, b, p, q, engine));
}

}  // namespace bmv
