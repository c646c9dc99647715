#pragma once

// Exhaustive sign scans of Tr S_{p,q}(A,B) over p + q <= max_total_degree.
// Negative values are findings, reported only after independent engines
// reproduce them exactly.

#include "bmv/matrix.hpp"
#include "bmv/random.hpp"

#include <json.hpp>

#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace bmv {

enum class Sign { negative, zero, positive };

std::string_view to_string(Sign s);
Sign sign_of(const Rational& v);

/// traces[p][q] = Tr S_{p,q} for p + q <= degree.
using TraceTriangle = std::vector<std::vector<Rational>>;

/// Source of trace coefficients for a scan. The default implementation uses
/// the exact engines; tests substitute stubs to exercise reporting paths.
class TraceProvider {
public:
    virtual ~TraceProvider() = default;

    /// Engine label recorded in reports.
    virtual std::string name() const = 0;

    virtual TraceTriangle trace_triangle(const HermitianMatrix& a, const HermitianMatrix& b, long degree) const = 0;

    /// Independent recomputations of Tr S_{p,q} as (engine label, value).
    /// A negative primary value is reported only if every entry agrees.
    virtual std::vector<std::pair<std::string, Rational>> certify(const HermitianMatrix& a, const HermitianMatrix& b,
                                                                  long p, long q) const = 0;
};

/// Recursive table as primary; Toeplitz powers plus the word oracle (when
/// C(p+q,q) is within its limit) as certifiers.
class ExactTraceProvider final : public TraceProvider {
public:
    std::string name() const override { return "recursive"; }
    TraceTriangle trace_triangle(const HermitianMatrix& a, const HermitianMatrix& b, long degree) const override;
    std::vector<std::pair<std::string, Rational>> certify(const HermitianMatrix& a, const HermitianMatrix& b, long p,
                                                          long q) const override;
};

const TraceProvider& default_trace_provider();

struct CellResult {
    long p = 0;
    long q = 0;
    Rational value;
};

struct Violation {
    long p = 0;
    long q = 0;
    Rational value;
    std::vector<std::string> certified_by;
};

struct ScanReport {
    std::string descriptor;
    long max_total_degree = 0;
    std::string engine;
    /// True when Tr AB = 0 and the mixed cells were filled from the
    /// AB = 0 identity instead of the engines.
    bool trace_zero_shortcut = false;
    std::vector<CellResult> cells;  // ordered by total degree, then q
    std::vector<Violation> violations;
    double elapsed_seconds = 0.0;

    bool has_violations() const { return !violations.empty(); }
};

/// Scans one PSD pair. Non-PSD input raises std::invalid_argument naming
/// the failing principal minor. A negative cell with min(p,q) <= 2, or a
/// negative value the certifiers do not reproduce, raises
/// InternalConsistencyError.
ScanReport scan_pair(const HermitianMatrix& a, const HermitianMatrix& b, long max_total_degree,
                     const TraceProvider& provider = default_trace_provider(), std::string descriptor = "");

struct AggregateReport {
    Index n = 0;
    long samples = 0;
    long max_total_degree = 0;
    std::uint64_t seed = 0;
    long magnitude = 0;
    std::vector<ScanReport> reports;  // in sample-index order
    double elapsed_seconds = 0.0;

    std::size_t total_violations() const;
};

/// The random pair for sample `index`: A and B are Gram matrices drawn from
/// sub-seeds of seed ^ index.
HermitianPair random_scan_pair(Index n, std::uint64_t seed, long index, long magnitude);

/// Deterministic in (n, samples, max_total_degree, seed, magnitude); the
/// thread count only affects wall time.
AggregateReport scan_random(Index n, long samples, long max_total_degree, std::uint64_t seed, long magnitude = 3,
                            unsigned threads = 1, const TraceProvider& provider = default_trace_provider());

nlohmann::ordered_json to_json(const ScanReport& report, bool include_timing = false);
nlohmann::ordered_json to_json(const AggregateReport& report, bool include_timing = false);

/// CSV with header "p,q,value,sign,engine".
std::string to_csv(const ScanReport& report);
/// CSV with header "sample,p,q,value,sign,engine".
std::string to_csv(const AggregateReport& report);

}  // namespace bmv
