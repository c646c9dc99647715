#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bmv/case3.hpp"
#include "bmv/engines.hpp"
#include "bmv/matrix_io.hpp"
#include "bmv/random.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace bmv;
using bmv::test::R;

namespace {

Case3Params sample_point() { return make_case3_params(1, 1, R("1/2"), R("1/2"), R("1/2"), R("1/2")); }

/// Random point on the surface with u^2 < xy.
Case3Params random_point(std::uint64_t seed)
{
    Rng rng(seed);
    const Rational x(rng.draw(1, 6), rng.draw(1, 4));
    const Rational y(rng.draw(1, 6), rng.draw(1, 4));
    Rational u(rng.draw(1, 5), rng.draw(1, 5));
    while (u * u >= x * y) u /= 2;
    const Rational v(rng.draw(1, 5), rng.draw(1, 5));
    const Rational w(rng.draw(1, 5), rng.draw(1, 5));
    const Rational a(rng.draw(0, 6), 6);
    return make_case3_params(x, y, u, v, w, a);
}

Case3Grid parse_grid(const char* text) { return grid_from_json(nlohmann::json::parse(text), "grid.json"); }

}  // namespace

TEST_CASE("solve_for_z: examples")
{
    CHECK(solve_for_z(1, 1, R("1/2"), R("1/2"), R("1/2")) == 1);
    CHECK(solve_for_z(2, 1, R("1"), R("1"), R("1")) == 5);
    CHECK_THROWS_AS(solve_for_z(1, 1, 0, 1, 1), std::invalid_argument);
    CHECK_THROWS_AS(solve_for_z(1, 1, 1, 1, 1), std::invalid_argument);
    CHECK_THROWS_AS(solve_for_z(0, 1, R("1/2"), 1, 1), std::invalid_argument);
}

TEST_CASE("build_case3_pair: the sample point")
{
    const Case3Params p = sample_point();
    CHECK(p.z == 1);
    const Case3Pair pair = build_case3_pair(p);
    CHECK(is_psd(pair.b));
    CHECK(determinant(pair.b.matrix()).is_zero());
    CHECK(real_trace(pair.b.matrix()) == 3);
    CHECK(pair.a == test::diag({"1", "1/2", "0"}));
    CHECK_NOTHROW(make_case3_params(1, 1, R("1/2"), R("1/2"), R("1/2"), 0));
    CHECK_NOTHROW(make_case3_params(1, 1, R("1/2"), R("1/2"), R("1/2"), 1));
}

TEST_CASE("case3 validation names the violated constraint")
{
    auto violation = [](Case3Params p) { return case3_violation(p).value_or("ok"); };
    Case3Params p = sample_point();
    CHECK(violation(p) == "ok");
    p.u = 0;
    CHECK(violation(p) == "u,v,w>0 required");
    p = sample_point();
    p.a = R("3/2");
    CHECK(violation(p) == "0<=a<=1 required");
    p = sample_point();
    p.z = 2;
    CHECK(violation(p).find("det B = 0") != std::string::npos);
    p = sample_point();
    p.x = R("1/8");
    CHECK(violation(p) == "u^2<=xy required");
    CHECK_THROWS_WITH_AS(validate(p), "u^2<=xy required", std::invalid_argument);
}

TEST_CASE("pole coefficients: examples and series-product oracle")
{
    CHECK(pole_coefficient(0, 0, R("1/2"), 0) == 1);
    CHECK(pole_coefficient(0, 0, R("1/2"), 3) == 0);
    CHECK(pole_coefficient(1, 0, R("1/2"), 7) == 1);
    CHECK(pole_coefficient(0, 1, R("1/2"), 3) == R("1/8"));
    CHECK(pole_coefficient(2, 0, 0, 5) == 6);
    CHECK(pole_coefficient(1, 1, R("1/2"), 2) == R("7/4"));
    CHECK(pole_coefficient(1, 1, 1, 4) == 5);
    CHECK(pole_coefficient(3, 1, R("1/3"), -1) == 0);
    CHECK_THROWS_AS(pole_coefficient(-1, 0, 1, 1), std::invalid_argument);

    for (const Rational& a : {Rational(0), R("1/3"), R("1/2"), R("5/6"), Rational(1)})
        for (int i = 0; i <= 4; ++i)
            for (int j = 0; i + j <= 4; ++j) {
                const auto oracle = oracle::pole_series(i, j, a, 30);
                for (long m = 0; m <= 30; ++m) CHECK(pole_coefficient(i, j, a, m) == oracle[static_cast<std::size_t>(m)]);
            }
}

TEST_CASE("case3 series: frozen values at the sample point")
{
    // Symbolic expansion of Tr B(I-tA)^{-1}B(I-tA)^{-1}B(I-tA)^{-1}(I-tA)^{-1}.
    const std::vector<Rational> expected{R("27/4"),   R("27/2"),    R("405/16"),   R("675/16"),
                                         R("4179/64"), R("1533/16"), R("34521/256"), R("46965/256")};
    CHECK(case3_series(sample_point(), 7) == expected);
    CHECK(case3_series_generic(sample_point(), 7) == expected);
    const Case3Pair pair = build_case3_pair(sample_point());
    for (long m = 0; m <= 7; ++m) CHECK(trace_coeff(pair.a, pair.b, m, 3) == expected[static_cast<std::size_t>(m)]);
}

TEST_CASE("property: closed form equals the generic engine")
{
    for (std::uint64_t seed = 0; seed < 12; ++seed) {
        const Case3Params p = random_point(seed);
        CAPTURE(seed);
        CHECK(case3_series(p, 40) == case3_series_generic(p, 40));
    }
}

TEST_CASE("property: pole terms reassembled by series products give the same series")
{
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
        const Case3Params p = random_point(seed + 100);
        std::vector<Rational> total(21);
        for (const auto& t : case3_pole_terms(p)) {
            const auto s = oracle::pole_series(t.i, t.j, p.a, 20);
            for (std::size_t m = 0; m <= 20; ++m) total[m] += t.weight * s[m];
        }
        CHECK(total == case3_series_generic(p, 20));
    }
}

TEST_CASE("property: scaling B by lambda scales every coefficient by lambda^3")
{
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
        const Case3Params p = random_point(seed + 200);
        for (const Rational& lambda : {R("1/2"), Rational(2), R("7/3")}) {
            const Case3Params q =
                make_case3_params(lambda * p.x, lambda * p.y, lambda * p.u, lambda * p.v, lambda * p.w, p.a);
            CHECK(q.z == lambda * p.z);
            const auto base = case3_series(p, 25);
            const auto scaled = case3_series(q, 25);
            for (std::size_t m = 0; m < base.size(); ++m) {
                CHECK(scaled[m] == lambda * lambda * lambda * base[m]);
                CHECK(scaled[m].sign() == base[m].sign());
            }
        }
    }
}

TEST_CASE("grid parsing")
{
    const Case3Grid g = parse_grid(R"({"x": ["1"], "y": ["1"], "uvw": ["1/4", "1/2", "3/4"],
                                       "a": ["0", "1/2", "1"], "scale": ["1", "2", "1/2"], "order": 12})");
    CHECK(g.tie_uvw);
    CHECK(g.order == 12);
    const auto pts = g.points();
    CHECK(pts.size() == 27);
    CHECK(pts[0].u == R("1/4"));
    CHECK(pts[0].v == R("1/4"));
    CHECK(pts[1].x == 2);
    CHECK(pts[3].a == R("1/2"));

    const Case3Grid h = parse_grid(R"({"x": ["1", "2"], "y": ["1"], "u": ["1/2"], "v": ["1/2"], "w": ["1/4"],
                                       "a": ["1/2"]})");
    CHECK(h.points().size() == 2);
    CHECK_FALSE(h.order.has_value());

    auto error_of = [](const char* text) {
        try {
            parse_grid(text);
        } catch (const ParseError& e) {
            return std::string(e.what());
        }
        return std::string("no error");
    };
    CHECK(error_of(R"({"x": [], "y": ["1"], "uvw": ["1"], "a": ["0"]})").find("\"x\" is empty") != std::string::npos);
    CHECK(error_of(R"({"x": ["1"], "y": ["1"], "uvw": ["1"], "a": ["0"], "b": ["1"]})").find("unknown grid key") !=
          std::string::npos);
    CHECK(error_of(R"({"x": ["1"], "y": ["1"], "uvw": ["1"], "u": ["1"], "a": ["0"]})").find("cannot be combined") !=
          std::string::npos);
    CHECK(error_of(R"({"x": ["1"], "y": ["1"], "uvw": ["1"]})").find("missing grid list \"a\"") != std::string::npos);
    CHECK(error_of(R"({"x": ["1/0"], "y": ["1"], "uvw": ["1"], "a": ["0"]})").find("x[0]") != std::string::npos);
    CHECK(error_of(R"({"x": ["1"], "y": ["1"], "uvw": ["1"], "a": ["0"], "order": -1})").find("order") !=
          std::string::npos);
}

TEST_CASE("case3_scan")
{
    const auto report = case3_scan({sample_point()}, 100);
    CHECK(report.total_violations() == 0);
    CHECK(report.points[0].crosschecked);
    CHECK(report.points[0].coefficients.size() == 101);
    CHECK_THROWS_AS(case3_scan({}, 10), std::invalid_argument);

    std::vector<Case3Params> pts;
    for (std::uint64_t seed = 0; seed < 5; ++seed) pts.push_back(random_point(seed));
    CHECK(to_json(case3_scan(pts, 20, true, 1)).dump() == to_json(case3_scan(pts, 20, true, 4)).dump());
    CHECK(to_csv(case3_scan({sample_point()}, 0)) == "point,m,value,sign,engine\n0,0,27/4,positive,closed_form+resolvent\n");
    CHECK(to_csv(case3_scan({sample_point()}, 0, false)) == "point,m,value,sign,engine\n0,0,27/4,positive,closed_form\n");
}
