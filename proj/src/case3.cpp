#include "bmv/case3.hpp"

#include "bmv/engines.hpp"
#include "bmv/errors.hpp"
#include "bmv/matrix_io.hpp"

#include <atomic>
#include <chrono>
#include <exception>
#include <fstream>
#include <sstream>
#include <thread>

namespace bmv {

namespace {

enum class Monomial { x3, y3, z3, xu2, yu2, xv2, zv2, yw2, zw2, uvw };

struct EntryTerm {
    Monomial monomial;
    int coeff;
    int i;  // power of 1/(1-t)
    int j;  // power of 1/(1-at)
};

// Diagonal entries of (B (I-tA)^{-1})^3. Each term counts every closed walk
// through the corresponding entry, hence the factors of 2.
constexpr EntryTerm kEntry11[] = {
    {Monomial::x3, 1, 3, 0}, {Monomial::xu2, 2, 2, 1}, {Monomial::xv2, 2, 2, 0},
    {Monomial::yu2, 1, 1, 2}, {Monomial::uvw, -2, 1, 1}, {Monomial::zv2, 1, 1, 0},
};
constexpr EntryTerm kEntry22[] = {
    {Monomial::y3, 1, 0, 3}, {Monomial::yu2, 2, 1, 2}, {Monomial::yw2, 2, 0, 2},
    {Monomial::xu2, 1, 2, 1}, {Monomial::zw2, 1, 0, 1}, {Monomial::uvw, -2, 1, 1},
};
constexpr EntryTerm kEntry33[] = {
    {Monomial::z3, 1, 0, 0}, {Monomial::zv2, 2, 1, 0}, {Monomial::zw2, 2, 0, 1},
    {Monomial::xv2, 1, 2, 0}, {Monomial::yw2, 1, 0, 2}, {Monomial::uvw, -2, 1, 1},
};

Rational evaluate(Monomial m, const Case3Params& p)
{
    switch (m) {
    case Monomial::x3: return p.x * p.x * p.x;
    case Monomial::y3: return p.y * p.y * p.y;
    case Monomial::z3: return p.z * p.z * p.z;
    case Monomial::xu2: return p.x * p.u * p.u;
    case Monomial::yu2: return p.y * p.u * p.u;
    case Monomial::xv2: return p.x * p.v * p.v;
    case Monomial::zv2: return p.z * p.v * p.v;
    case Monomial::yw2: return p.y * p.w * p.w;
    case Monomial::zw2: return p.z * p.w * p.w;
    case Monomial::uvw: return p.u * p.v * p.w;
    }
    return 0;
}

// t^s coefficient of (1 - t)^{-i}.
Integer geometric_power_coeff(int i, long s)
{
    if (s < 0) return 0;
    if (i == 0) return s == 0 ? 1 : 0;
    return binomial(s + i - 1, i - 1);
}

}  // namespace

std::optional<std::string> case3_violation(const Case3Params& p)
{
    if (p.u.sign() <= 0 || p.v.sign() <= 0 || p.w.sign() <= 0) return "u,v,w>0 required";
    if (p.a.sign() < 0 || p.a > 1) return "0<=a<=1 required";
    if (p.x.sign() < 0 || p.y.sign() < 0 || p.z.sign() < 0) return "x,y,z>=0 required";
    if (p.u * p.u > p.x * p.y) return "u^2<=xy required";
    if (p.v * p.v > p.x * p.z) return "v^2<=xz required";
    if (p.w * p.w > p.y * p.z) return "w^2<=yz required";
    if (2 * p.u * p.v * p.w != p.x * p.y * p.z - p.u * p.u * p.z - p.v * p.v * p.y - p.w * p.w * p.x)
        return "det B = 0 surface equation 2uvw = xyz - u^2 z - v^2 y - w^2 x violated";
    return std::nullopt;
}

void validate(const Case3Params& p)
{
    if (auto v = case3_violation(p)) throw std::invalid_argument(*v);
}

Rational solve_for_z(const Rational& x, const Rational& y, const Rational& u, const Rational& v, const Rational& w)
{
    if (u.sign() <= 0 || v.sign() <= 0 || w.sign() <= 0) throw std::invalid_argument("u,v,w>0 required");
    if (x.sign() <= 0 || y.sign() <= 0) throw std::invalid_argument("x,y>0 required to solve for z");
    const Rational den = x * y - u * u;
    if (den.sign() <= 0) throw std::invalid_argument("u^2<xy required to solve for z");
    return (2 * u * v * w + v * v * y + w * w * x) / den;
}

Case3Params make_case3_params(const Rational& x, const Rational& y, const Rational& u, const Rational& v,
                              const Rational& w, const Rational& a)
{
    Case3Params p{x, y, solve_for_z(x, y, u, v, w), u, v, w, a};
    validate(p);
    return p;
}

Case3Pair build_case3_pair(const Case3Params& p)
{
    validate(p);
    const std::vector<Rational> diag{Rational(1), p.a, Rational(0)};
    ExactMatrix b(3, 3);
    b << Gaussian(p.x), Gaussian(-p.u), Gaussian(-p.v),
         Gaussian(-p.u), Gaussian(p.y), Gaussian(-p.w),
         Gaussian(-p.v), Gaussian(-p.w), Gaussian(p.z);
    HermitianMatrix hb(std::move(b));
    if (auto minor = find_negative_minor(hb)) throw InternalConsistencyError("surface point is not PSD: " + describe(*minor));
    if (!determinant(hb.matrix()).is_zero()) throw InternalConsistencyError("surface point has det B != 0");
    return {HermitianMatrix::diagonal(diag), std::move(hb)};
}

std::vector<PoleTerm> case3_pole_terms(const Case3Params& p)
{
    std::vector<PoleTerm> terms;
    // The trace weights entry (1,1) by 1/(1-t) and entry (2,2) by 1/(1-at).
    for (const auto& t : kEntry11) terms.push_back({t.i + 1, t.j, t.coeff * evaluate(t.monomial, p)});
    for (const auto& t : kEntry22) terms.push_back({t.i, t.j + 1, t.coeff * evaluate(t.monomial, p)});
    for (const auto& t : kEntry33) terms.push_back({t.i, t.j, t.coeff * evaluate(t.monomial, p)});
    return terms;
}

Rational pole_coefficient(int i, int j, const Rational& a, long m)
{
    if (i < 0 || j < 0) throw std::invalid_argument("pole_coefficient: exponents must be >= 0");
    if (m < 0) return 0;
    Rational sum = 0;
    Rational a_power = 1;
    for (long r = 0; r <= m; ++r) {
        const Integer left = geometric_power_coeff(j, r);
        const Integer right = geometric_power_coeff(i, m - r);
        if (!left.is_zero() && !right.is_zero()) sum += Rational(left * right) * a_power;
        a_power *= a;
    }
    return sum;
}

std::vector<Rational> case3_series(const Case3Params& p, long order)
{
    if (order < 0) throw std::invalid_argument("order must be >= 0");
    validate(p);
    const auto terms = case3_pole_terms(p);
    std::vector<Rational> out(static_cast<std::size_t>(order + 1));
    for (long m = 0; m <= order; ++m)
        for (const auto& t : terms)
            if (!t.weight.is_zero()) out[static_cast<std::size_t>(m)] += t.weight * pole_coefficient(t.i, t.j, p.a, m);
    return out;
}

std::vector<Rational> case3_series_generic(const Case3Params& p, long order)
{
    const Case3Pair pair = build_case3_pair(p);
    const auto series = resolvent_series(pair.a.matrix(), pair.b.matrix(), 4, order);
    std::vector<Rational> out;
    for (long m = 0; m <= order; ++m) out.push_back(real_trace(series[m]));
    return out;
}

std::vector<Case3Params> Case3Grid::points() const
{
    std::vector<Case3Params> out;
    const std::vector<Rational> one{Rational(1)};
    const auto& scales = scale.empty() ? one : scale;
    for (const auto& gx : x)
        for (const auto& gy : y)
            for (const auto& gu : u)
                for (const auto& gv : tie_uvw ? std::vector<Rational>{gu} : v)
                    for (const auto& gw : tie_uvw ? std::vector<Rational>{gu} : w)
                        for (const auto& ga : a)
                            for (const auto& s : scales)
                                out.push_back(make_case3_params(s * gx, s * gy, s * gu, s * gv, s * gw, ga));
    return out;
}

Case3Grid grid_from_json(const nlohmann::json& doc, std::string_view source)
{
    if (!doc.is_object()) throw ParseError(std::string(source) + ": grid must be a JSON object");
    auto list = [&](const char* key, bool required) {
        std::vector<Rational> values;
        if (!doc.contains(key)) {
            if (required) throw ParseError(std::string(source) + ": missing grid list \"" + key + "\"");
            return values;
        }
        const auto& arr = doc[key];
        if (!arr.is_array()) throw ParseError(std::string(source) + ": \"" + key + "\" must be an array");
        if (arr.empty()) throw ParseError(std::string(source) + ": grid list \"" + key + "\" is empty");
        for (std::size_t i = 0; i < arr.size(); ++i)
            values.push_back(rational_from_json(arr[i], source, std::string(key) + "[" + std::to_string(i) + "]"));
        return values;
    };
    for (const auto& [key, value] : doc.items()) {
        static const char* known[] = {"x", "y", "u", "v", "w", "uvw", "a", "scale", "order"};
        if (std::find_if(std::begin(known), std::end(known), [&](const char* k) { return key == k; }) == std::end(known))
            throw ParseError(std::string(source) + ": unknown grid key \"" + key + "\"");
    }
    Case3Grid g;
    g.tie_uvw = doc.contains("uvw");
    if (g.tie_uvw && (doc.contains("u") || doc.contains("v") || doc.contains("w")))
        throw ParseError(std::string(source) + ": \"uvw\" cannot be combined with \"u\", \"v\" or \"w\"");
    g.x = list("x", true);
    g.y = list("y", true);
    if (g.tie_uvw) {
        g.u = list("uvw", true);
    } else {
        g.u = list("u", true);
        g.v = list("v", true);
        g.w = list("w", true);
    }
    g.a = list("a", true);
    g.scale = list("scale", false);
    if (doc.contains("order")) {
        if (!doc["order"].is_number_integer() || doc["order"].get<long long>() < 0)
            throw ParseError(std::string(source) + ": \"order\" must be a nonnegative integer");
        g.order = doc["order"].get<long>();
    }
    return g;
}

Case3Grid load_grid(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError(path.string() + ": cannot open file");
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(path.string() + ": byte " + std::to_string(e.byte) + ": malformed JSON");
    }
    return grid_from_json(doc, path.string());
}

std::size_t Case3ScanReport::total_violations() const
{
    std::size_t total = 0;
    for (const auto& p : points) total += p.violations.size();
    return total;
}

namespace {

Case3PointReport scan_point(const Case3Params& params, long order, bool crosscheck)
{
    Case3PointReport r{params, case3_series(params, order), crosscheck, {}};
    if (crosscheck) {
        const auto generic = case3_series_generic(params, order);
        for (long m = 0; m <= order; ++m)
            if (generic[static_cast<std::size_t>(m)] != r.coefficients[static_cast<std::size_t>(m)])
                throw InternalConsistencyError("closed form and resolvent engine disagree at m=" + std::to_string(m) +
                                               ": " + to_string(r.coefficients[static_cast<std::size_t>(m)]) + " vs " +
                                               to_string(generic[static_cast<std::size_t>(m)]));
    }
    for (long m = 0; m <= order; ++m) {
        const Rational& c = r.coefficients[static_cast<std::size_t>(m)];
        if (c.sign() >= 0) continue;
        const Case3Pair pair = build_case3_pair(params);
        const Rational check = trace_coeff(pair.a, pair.b, m, 3, Engine::recursive);
        if (check != c)
            throw InternalConsistencyError("negative closed-form coefficient at m=" + std::to_string(m) +
                                           " not reproduced by the recursive engine");
        Violation v{m, 3, c, {"closed_form", "recursive"}};
        if (crosscheck) v.certified_by.emplace_back("resolvent");
        r.violations.push_back(std::move(v));
    }
    return r;
}

}  // namespace

Case3ScanReport case3_scan(const std::vector<Case3Params>& points, long order, bool crosscheck, unsigned threads)
{
    if (points.empty()) throw std::invalid_argument("case3_scan: empty point set");
    if (order < 0) throw std::invalid_argument("order must be >= 0");
    const auto start = std::chrono::steady_clock::now();
    Case3ScanReport report;
    report.order = order;
    report.crosscheck = crosscheck;
    report.points.resize(points.size());
    std::vector<std::exception_ptr> errors(points.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < points.size(); i = next++) {
            try {
                report.points[i] = scan_point(points[i], order, crosscheck);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const unsigned count = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(points.size())));
    if (count == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < count; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
    report.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

nlohmann::ordered_json to_json(const Case3Params& p)
{
    return {{"x", to_string(p.x)}, {"y", to_string(p.y)}, {"z", to_string(p.z)}, {"u", to_string(p.u)},
            {"v", to_string(p.v)}, {"w", to_string(p.w)}, {"a", to_string(p.a)}};
}

nlohmann::ordered_json to_json(const Case3ScanReport& report, bool include_timing)
{
    nlohmann::ordered_json j;
    j["order"] = report.order;
    j["crosscheck"] = report.crosscheck;
    j["total_violations"] = report.total_violations();
    j["status"] = report.total_violations() > 0 ? "violations_certified" : "no_violations";
    auto pts = nlohmann::ordered_json::array();
    for (const auto& p : report.points) {
        nlohmann::ordered_json jp;
        jp["params"] = to_json(p.params);
        jp["crosschecked"] = p.crosschecked;
        auto coeffs = nlohmann::ordered_json::array();
        for (const auto& c : p.coefficients) coeffs.push_back(to_string(c));
        jp["coefficients"] = std::move(coeffs);
        auto viol = nlohmann::ordered_json::array();
        for (const auto& v : p.violations)
            viol.push_back({{"m", v.p}, {"value", to_string(v.value)}, {"certified_by", v.certified_by}});
        jp["violations"] = std::move(viol);
        pts.push_back(std::move(jp));
    }
    j["points"] = std::move(pts);
    if (include_timing) j["elapsed_seconds"] = report.elapsed_seconds;
    return j;
}

std::string to_csv(const Case3ScanReport& report)
{
    std::ostringstream out;
    out << "point,m,value,sign,engine\n";
    const char* engine = report.crosscheck ? "closed_form+resolvent" : "closed_form";
    for (std::size_t i = 0; i < report.points.size(); ++i)
        for (std::size_t m = 0; m < report.points[i].coefficients.size(); ++m) {
            const Rational& c = report.points[i].coefficients[m];
            out << i << ',' << m << ',' << to_string(c) << ',' << to_string(sign_of(c)) << ',' << engine << '\n';
        }
    return out.str();
}

}  // namespace bmv
