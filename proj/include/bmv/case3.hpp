#pragma once

// The 3x3 family A = diag(1, a, 0), 0 <= a <= 1, and the singular PSD
//
//         [  x  -u  -v ]
//     B = [ -u   y  -w ],   u, v, w > 0,   det B = 0,
//         [ -v  -w   z ]
//
// for which Tr (I - tA)^{-1} (B (I - tA)^{-1})^3 is a finite sum of terms
// weight / ((1 - t)^i (1 - at)^j). Its t^m coefficient is Tr S_{m,3}(A,B).

#include "bmv/matrix.hpp"
#include "bmv/scan.hpp"

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace bmv {

struct Case3Params {
    Rational x, y, z, u, v, w, a;
};

/// Name of the first violated constraint, or nullopt when the parameters lie
/// on the det B = 0 surface of the PSD family.
std::optional<std::string> case3_violation(const Case3Params& p);

/// Throws std::invalid_argument naming the violated constraint.
void validate(const Case3Params& p);

/// z = (2uvw + v^2 y + w^2 x) / (xy - u^2), the point of the det B = 0
/// surface above (x, y, u, v, w). Requires x, y > 0, u, v, w > 0, u^2 < xy.
Rational solve_for_z(const Rational& x, const Rational& y, const Rational& u, const Rational& v, const Rational& w);

/// Parameters with z solved from the surface equation; validated.
Case3Params make_case3_params(const Rational& x, const Rational& y, const Rational& u, const Rational& v,
                              const Rational& w, const Rational& a);

struct Case3Pair {
    HermitianMatrix a;
    HermitianMatrix b;
};

Case3Pair build_case3_pair(const Case3Params& p);

/// weight / ((1 - t)^i (1 - a t)^j).
struct PoleTerm {
    int i = 0;
    int j = 0;
    Rational weight;
};

/// The trace expansion as pole terms (one group per diagonal entry of
/// (B(I-tA)^{-1})^3, with the (I-tA)^{-1} prefactor of the trace folded into
/// the exponents).
std::vector<PoleTerm> case3_pole_terms(const Case3Params& p);

/// t^m coefficient of (1 - t)^{-i} (1 - a t)^{-j}.
Rational pole_coefficient(int i, int j, const Rational& a, long m);

/// Coefficients of t^0 .. t^order of the closed-form series.
std::vector<Rational> case3_series(const Case3Params& p, long order);

/// Same coefficients from the generic resolvent engine (k = 4).
std::vector<Rational> case3_series_generic(const Case3Params& p, long order);

/// Parameter grid. Lists are combined as a Cartesian product in the order
/// x, y, u, v, w, a, scale; "uvw" ties u = v = w. "scale" multiplies
/// x, y, u, v, w before z is solved.
struct Case3Grid {
    std::vector<Rational> x, y, u, v, w, a, scale;
    bool tie_uvw = false;
    std::optional<long> order;

    std::vector<Case3Params> points() const;
};

Case3Grid grid_from_json(const nlohmann::json& doc, std::string_view source);
Case3Grid load_grid(const std::filesystem::path& path);

struct Case3PointReport {
    Case3Params params;
    std::vector<Rational> coefficients;
    bool crosschecked = false;
    std::vector<Violation> violations;  // p = m, q = 3
};

struct Case3ScanReport {
    long order = 0;
    bool crosscheck = true;
    std::vector<Case3PointReport> points;
    double elapsed_seconds = 0.0;

    std::size_t total_violations() const;
};

/// Evaluates the closed form at every point. With `crosscheck` the whole
/// series is compared against the generic engine; negative coefficients are
/// always re-derived by the recursive engine before they are reported.
/// Disagreement raises InternalConsistencyError.
Case3ScanReport case3_scan(const std::vector<Case3Params>& points, long order, bool crosscheck = true,
                           unsigned threads = 1);

nlohmann::ordered_json to_json(const Case3Params& p);
nlohmann::ordered_json to_json(const Case3ScanReport& report, bool include_timing = false);
/// CSV with header "point,m,value,sign,engine".
std::string to_csv(const Case3ScanReport& report);

}  // namespace bmv
