#include "bmv/scan.hpp"

#include "bmv/asymptotics.hpp"
#include "bmv/engines.hpp"
#include "bmv/errors.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace bmv {

std::string_view to_string(Sign s)
{
    switch (s) {
    case Sign::negative:
        return "negative";
    case Sign::zero:
        return "zero";
    case Sign::positive:
        return "positive";
    }
    return "unknown";
}

Sign sign_of(const Rational& v)
{
    const int s = v.sign();
    return s < 0 ? Sign::negative : (s == 0 ? Sign::zero : Sign::positive);
}

TraceTriangle ExactTraceProvider::trace_triangle(const HermitianMatrix& a, const HermitianMatrix& b, long degree) const
{
    const auto table = s_table_recursive(a.matrix(), b.matrix(), degree, degree);
    TraceTriangle out(static_cast<std::size_t>(degree + 1));
    for (long p = 0; p <= degree; ++p)
        for (long q = 0; p + q <= degree; ++q) out[static_cast<std::size_t>(p)].push_back(real_trace(table.at(p, q)));
    return out;
}

std::vector<std::pair<std::string, Rational>> ExactTraceProvider::certify(const HermitianMatrix& a,
                                                                          const HermitianMatrix& b, long p,
                                                                          long q) const
{
    std::vector<std::pair<std::string, Rational>> out;
    out.emplace_back("toeplitz", real_trace(s_from_toeplitz(a.matrix(), b.matrix(), p + q, q + 1)));
    if (word_count(p, q) <= kWordOracleLimit) out.emplace_back("words", real_trace(s_words(a.matrix(), b.matrix(), p, q)));
    return out;
}

const TraceProvider& default_trace_provider()
{
    static const ExactTraceProvider provider;
    return provider;
}

namespace {

// Tr A^p for q = 0, Tr B^q for p = 0, zero elsewhere: valid whenever AB = 0.
TraceTriangle zero_product_triangle(const HermitianMatrix& a, const HermitianMatrix& b, long degree)
{
    TraceTriangle out(static_cast<std::size_t>(degree + 1));
    const Index n = a.size();
    ExactMatrix ap = ExactMatrix::Identity(n, n);
    std::vector<Rational> b_traces;
    ExactMatrix bq = ExactMatrix::Identity(n, n);
    for (long q = 0; q <= degree; ++q) {
        b_traces.push_back(real_trace(bq));
        bq = bq * b.matrix();
    }
    for (long p = 0; p <= degree; ++p) {
        auto& row = out[static_cast<std::size_t>(p)];
        for (long q = 0; p + q <= degree; ++q) {
            if (q == 0)
                row.push_back(real_trace(ap));
            else if (p == 0)
                row.push_back(b_traces[static_cast<std::size_t>(q)]);
            else
                row.emplace_back(0);
        }
        ap = ap * a.matrix();
    }
    return out;
}

}  // namespace

ScanReport scan_pair(const HermitianMatrix& a, const HermitianMatrix& b, long max_total_degree,
                     const TraceProvider& provider, std::string descriptor)
{
    if (max_total_degree < 0) throw std::invalid_argument("max_total_degree must be >= 0");
    const auto start = std::chrono::steady_clock::now();
    // Validates dimensions and PSD-ness of both inputs.
    const ZeroProductResult zp = zero_product_check(a, b);

    ScanReport report;
    report.descriptor = std::move(descriptor);
    report.max_total_degree = max_total_degree;
    report.trace_zero_shortcut = zp.classification == TraceClass::TraceZero;
    report.engine = report.trace_zero_shortcut ? "zero_product" : provider.name();

    const TraceTriangle triangle = report.trace_zero_shortcut ? zero_product_triangle(a, b, max_total_degree)
                                                              : provider.trace_triangle(a, b, max_total_degree);

    for (long d = 0; d <= max_total_degree; ++d) {
        for (long q = 0; q <= d; ++q) {
            const long p = d - q;
            const Rational& value = triangle.at(static_cast<std::size_t>(p)).at(static_cast<std::size_t>(q));
            report.cells.push_back({p, q, value});
            if (value.sign() >= 0) continue;

            const std::string where = "Tr S_{" + std::to_string(p) + "," + std::to_string(q) + "} = " + to_string(value);
            if (std::min(p, q) <= 2)
                throw InternalConsistencyError(where + " is negative although min(p,q) <= 2; engine bug");
            Violation v{p, q, value, {}};
            for (const auto& [label, check] : provider.certify(a, b, p, q)) {
                if (check != value)
                    throw InternalConsistencyError(where + " not reproduced by " + label + " (" + to_string(check) + ")");
                v.certified_by.push_back(label);
            }
            if (v.certified_by.empty()) throw InternalConsistencyError(where + " has no independent certifier");
            report.violations.push_back(std::move(v));
        }
    }
    report.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

std::size_t AggregateReport::total_violations() const
{
    std::size_t total = 0;
    for (const auto& r : reports) total += r.violations.size();
    return total;
}

HermitianPair random_scan_pair(Index n, std::uint64_t seed, long index, long magnitude)
{
    const std::uint64_t sample_seed = seed ^ static_cast<std::uint64_t>(index);
    return {random_psd(n, derive_seed(sample_seed, 0), magnitude), random_psd(n, derive_seed(sample_seed, 1), magnitude)};
}

AggregateReport scan_random(Index n, long samples, long max_total_degree, std::uint64_t seed, long magnitude,
                            unsigned threads, const TraceProvider& provider)
{
    if (n < 1) throw std::invalid_argument("n must be >= 1");
    if (samples < 1) throw std::invalid_argument("samples must be >= 1");
    const auto start = std::chrono::steady_clock::now();
    AggregateReport agg{n, samples, max_total_degree, seed, magnitude, {}, 0.0};
    agg.reports.resize(static_cast<std::size_t>(samples));
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(samples));

    std::atomic<long> next{0};
    auto worker = [&] {
        for (long i = next++; i < samples; i = next++) {
            try {
                const HermitianPair pair = random_scan_pair(n, seed, i, magnitude);
                agg.reports[static_cast<std::size_t>(i)] =
                    scan_pair(pair.a, pair.b, max_total_degree, provider,
                              "seed=" + std::to_string(seed) + " index=" + std::to_string(i));
            } catch (...) {
                errors[static_cast<std::size_t>(i)] = std::current_exception();
            }
        }
    };
    const unsigned count = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(samples)));
    if (count == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < count; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
    agg.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return agg;
}

nlohmann::ordered_json to_json(const ScanReport& report, bool include_timing)
{
    nlohmann::ordered_json j;
    j["descriptor"] = report.descriptor;
    j["engine"] = report.engine;
    j["max_total_degree"] = report.max_total_degree;
    j["trace_zero_shortcut"] = report.trace_zero_shortcut;
    j["status"] = report.has_violations() ? "violations_certified" : "no_violations";
    auto cells = nlohmann::ordered_json::array();
    for (const auto& c : report.cells)
        cells.push_back({{"p", c.p}, {"q", c.q}, {"value", to_string(c.value)}, {"sign", to_string(sign_of(c.value))}});
    j["cells"] = std::move(cells);
    auto violations = nlohmann::ordered_json::array();
    for (const auto& v : report.violations)
        violations.push_back({{"p", v.p}, {"q", v.q}, {"value", to_string(v.value)}, {"certified_by", v.certified_by}});
    j["violations"] = std::move(violations);
    if (include_timing) j["elapsed_seconds"] = report.elapsed_seconds;
    return j;
}

nlohmann::ordered_json to_json(const AggregateReport& report, bool include_timing)
{
    nlohmann::ordered_json j;
    j["n"] = report.n;
    j["samples"] = report.samples;
    j["max_total_degree"] = report.max_total_degree;
    j["seed"] = report.seed;
    j["magnitude"] = report.magnitude;
    j["total_violations"] = report.total_violations();
    j["status"] = report.total_violations() > 0 ? "violations_certified" : "no_violations";
    auto pairs = nlohmann::ordered_json::array();
    for (const auto& r : report.reports) pairs.push_back(to_json(r, include_timing));
    j["pairs"] = std::move(pairs);
    if (include_timing) j["elapsed_seconds"] = report.elapsed_seconds;
    return j;
}

std::string to_csv(const ScanReport& report)
{
    std::ostringstream out;
    out << "p,q,value,sign,engine\n";
    for (const auto& c : report.cells)
        out << c.p << ',' << c.q << ',' << to_string(c.value) << ',' << to_string(sign_of(c.value)) << ','
            << report.engine << '\n';
    return out.str();
}

std::string to_csv(const AggregateReport& report)
{
    std::ostringstream out;
    out << "sample,p,q,value,sign,engine\n";
    for (std::size_t i = 0; i < report.reports.size(); ++i)
        for (const auto& c : report.reports[i].cells)
            out << i << ',' << c.p << ',' << c.q << ',' << to_string(c.value) << ',' << to_string(sign_of(c.value))
                << ',' << report.reports[i].engine << '\n';
    return out.str();
}

}  // namespace bmv
