#include "bmv/cli.hpp"

#include "bmv/asymptotics.hpp"
#include "bmv/case3.hpp"
#include "bmv/engines.hpp"
#include "bmv/errors.hpp"
#include "bmv/matrix_io.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <ostream>
#include <sstream>

namespace bmv::cli {

namespace {

struct RunConfig {
    std::string a_path;
    std::string b_path;
    std::string engine = "recursive";
    long p = 0;
    long q = 0;
    long max_degree = 0;
    long k = 0;
    long max_m = 0;
    long order = -1;
    long n = 0;
    long samples = 0;
    long magnitude = 3;
    std::uint64_t seed = 0;
    unsigned threads = 1;
    std::string epsilon;
    std::string format = "json";
    std::string output;
    std::string grid;
    std::string point;
    bool float_diagonalize = false;
    bool no_crosscheck = false;
    bool timing = false;
};

void add_output_options(CLI::App* sub, RunConfig& cfg)
{
    sub->add_option("--format", cfg.format, "Report format")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--output", cfg.output, "Write the report here instead of standard output");
    sub->add_flag("--timing", cfg.timing, "Include wall-clock timings in JSON reports (breaks byte-determinism)");
}

void add_pair_options(CLI::App* sub, RunConfig& cfg)
{
    sub->add_option("--A", cfg.a_path, "Matrix JSON file for A")->required();
    sub->add_option("--B", cfg.b_path, "Matrix JSON file for B")->required();
}

void emit(const RunConfig& cfg, const std::string& text, std::ostream& out)
{
    if (cfg.output.empty()) {
        out << text;
        return;
    }
    std::ofstream file(cfg.output, std::ios::binary);
    if (!file) throw std::runtime_error(cfg.output + ": cannot open for writing");
    file << text;
}

std::string fnv1a(const std::string& text)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    std::ostringstream s;
    s << std::hex << h;
    return s.str();
}

std::string describe_pair(const HermitianMatrix& a, const HermitianMatrix& b)
{
    return "A=fnv1a:" + fnv1a(matrix_to_json(a.matrix()).dump()) + " B=fnv1a:" + fnv1a(matrix_to_json(b.matrix()).dump());
}

void report_violations(const std::vector<Violation>& violations, std::ostream& err, const std::string& prefix = "")
{
    for (const auto& v : violations)
        err << "certified violation: " << prefix << "p=" << v.p << " q=" << v.q << " value=" << to_string(v.value)
            << '\n';
}

int cmd_coeff(const RunConfig& cfg, std::ostream& out)
{
    const auto engine = parse_engine(cfg.engine);
    if (!engine) throw std::invalid_argument("unknown engine \"" + cfg.engine + "\"");
    const HermitianMatrix a = load_hermitian(cfg.a_path);
    const HermitianMatrix b = load_hermitian(cfg.b_path);
    if (a.size() != b.size()) throw std::invalid_argument("A and B have different dimensions");
    const Rational value = trace_coeff(a, b, cfg.p, cfg.q, *engine);
    out << to_string(value) << '\n' << "approx " << approx_decimal(value) << '\n';
    return kExitOk;
}

int cmd_table(const RunConfig& cfg, std::ostream& out, std::ostream& err, const TraceProvider& provider)
{
    const HermitianMatrix a = load_hermitian(cfg.a_path);
    const HermitianMatrix b = load_hermitian(cfg.b_path);
    const ScanReport report = scan_pair(a, b, cfg.max_degree, provider, describe_pair(a, b));
    emit(cfg, cfg.format == "csv" ? to_csv(report) : to_json(report, cfg.timing).dump(2) + "\n", out);
    report_violations(report.violations, err);
    return report.has_violations() ? kExitViolation : kExitOk;
}

nlohmann::ordered_json asymptotic_json(const AsymptoticReport& r)
{
    nlohmann::ordered_json j;
    j["classification"] = to_string(r.classification);
    j["trace_AB"] = to_string(r.trace_ab);
    j["k"] = r.k;
    j["epsilon"] = to_string(r.epsilon);
    j["max_m"] = r.m_max;
    if (r.classification == TraceClass::TraceZero) {
        j["product_zero_verified"] = true;
        j["ratio_sequence"] = nlohmann::ordered_json::array();
        j["estimated_N"] = nullptr;
        return j;
    }
    j["p"] = r.leading->p;
    j["l"] = r.leading->l;
    j["C"] = matrix_to_json(r.block->matrix());
    j["limit_value"] = to_string(*r.limit_value);
    auto ratios = nlohmann::ordered_json::array();
    for (const auto& [m, v] : r.ratios) ratios.push_back({{"m", m}, {"ratio", to_string(v)}});
    j["ratio_sequence"] = std::move(ratios);
    if (r.estimated_N)
        j["estimated_N"] = *r.estimated_N;
    else
        j["estimated_N"] = nullptr;
    j["verified_through"] = r.m_max;
    return j;
}

int cmd_asympt(const RunConfig& cfg, std::ostream& out)
{
    const HermitianMatrix a = load_hermitian(cfg.a_path);
    const HermitianMatrix b = load_hermitian(cfg.b_path);
    const Rational epsilon = parse_rational(cfg.epsilon);
    if (cfg.float_diagonalize) {
        FloatDiagonalization fd = float_diagonalize(a, b);
        if (!fd.pair) throw std::invalid_argument(fd.warning);
        nlohmann::ordered_json j = asymptotic_json(asymptotic_report(*fd.pair, cfg.k, epsilon, cfg.max_m));
        nlohmann::ordered_json fp;
        fp["warning"] = fd.warning;
        fp["roundtrip_error_approx"] = fd.roundtrip_error;
        fp["a_diagonal"] = nlohmann::ordered_json::array();
        for (const auto& v : fd.pair->a_diagonal()) fp["a_diagonal"].push_back(to_string(v));
        if (j.contains("C")) {
            const auto block = leading_block(*fd.pair);
            fp["lambda1_C_approx"] = largest_eigenvalue(block);
        }
        j["float_preprocessing"] = std::move(fp);
        emit(cfg, j.dump(2) + "\n", out);
        return kExitOk;
    }
    std::optional<DiagonalPair> pair;
    try {
        pair.emplace(DiagonalPair::from_matrices(a, b));
    } catch (const std::invalid_argument& e) {
        throw std::invalid_argument(std::string(e.what()) +
                                    "; the exact path needs A = diag(a_1, ..., a_n) with a_1 >= ... >= a_n >= 0 and "
                                    "B PSD (pass --float-diagonalize to eigendecompose A approximately)");
    }
    emit(cfg, asymptotic_json(asymptotic_report(*pair, cfg.k, epsilon, cfg.max_m)).dump(2) + "\n", out);
    return kExitOk;
}

int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err, const TraceProvider& provider)
{
    if (cfg.n < 1) throw std::invalid_argument("--n must be >= 1");
    if (cfg.samples < 1) throw std::invalid_argument("--samples must be >= 1");
    if (cfg.magnitude < 1) throw std::invalid_argument("--magnitude must be >= 1");
    const AggregateReport report =
        scan_random(cfg.n, cfg.samples, cfg.max_degree, cfg.seed, cfg.magnitude, cfg.threads, provider);
    emit(cfg, cfg.format == "csv" ? to_csv(report) : to_json(report, cfg.timing).dump(2) + "\n", out);
    for (std::size_t i = 0; i < report.reports.size(); ++i)
        report_violations(report.reports[i].violations, err, "sample=" + std::to_string(i) + " ");
    return report.total_violations() > 0 ? kExitViolation : kExitOk;
}

std::vector<Rational> parse_point(const std::string& text)
{
    std::vector<Rational> values;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) values.push_back(parse_rational(item));
    if (values.size() != 6) throw std::invalid_argument("--point expects x,y,u,v,w,a (six rationals)");
    return values;
}

int cmd_case3(const RunConfig& cfg, std::ostream& out, std::ostream& err)
{
    if (cfg.grid.empty() == cfg.point.empty()) throw std::invalid_argument("pass exactly one of --grid or --point");
    std::vector<Case3Params> points;
    long order = cfg.order;
    if (!cfg.grid.empty()) {
        const Case3Grid grid = load_grid(cfg.grid);
        if (order < 0 && grid.order) order = *grid.order;
        points = grid.points();
    } else {
        const auto v = parse_point(cfg.point);
        points.push_back(make_case3_params(v[0], v[1], v[2], v[3], v[4], v[5]));
    }
    if (order < 0) throw std::invalid_argument("--order is required (or an \"order\" entry in the grid)");
    const Case3ScanReport report = case3_scan(points, order, !cfg.no_crosscheck, cfg.threads);
    emit(cfg, cfg.format == "csv" ? to_csv(report) : to_json(report, cfg.timing).dump(2) + "\n", out);
    for (std::size_t i = 0; i < report.points.size(); ++i)
        for (const auto& v : report.points[i].violations)
            err << "certified violation: point=" << i << " m=" << v.p << " value=" << to_string(v.value) << '\n';
    return report.total_violations() > 0 ? kExitViolation : kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, const Hooks& hooks)
{
    RunConfig cfg;
    CLI::App app{"Exact trace-coefficient toolkit for Tr (A + tB)^m", "bmv"};
    app.require_subcommand(1);

    auto* coeff = app.add_subcommand("coeff", "Exact Tr S_{p,q}(A,B)");
    add_pair_options(coeff, cfg);
    coeff->add_option("--p", cfg.p, "Number of A factors")->required()->check(CLI::NonNegativeNumber);
    coeff->add_option("--q", cfg.q, "Number of B factors")->required()->check(CLI::NonNegativeNumber);
    coeff->add_option("--engine", cfg.engine, "words|recursive|recursive_right|toeplitz|resolvent")
        ->check(CLI::IsMember({"words", "recursive", "recursive_right", "toeplitz", "resolvent"}));

    auto* table = app.add_subcommand("table", "Full trace table with certified sign scan");
    add_pair_options(table, cfg);
    table->add_option("--max-degree", cfg.max_degree, "Largest p + q")->required()->check(CLI::NonNegativeNumber);
    add_output_options(table, cfg);

    auto* asympt = app.add_subcommand("asympt", "Leading block, limit and threshold for large m");
    add_pair_options(asympt, cfg);
    asympt->add_option("--k", cfg.k, "Number of B factors")->required()->check(CLI::PositiveNumber);
    asympt->add_option("--epsilon", cfg.epsilon, "Rational in (0,1), e.g. 1/10")->required();
    asympt->add_option("--max-m", cfg.max_m, "Horizon for the ratio sequence")->required()->check(CLI::PositiveNumber);
    asympt->add_flag("--float-diagonalize", cfg.float_diagonalize, "Diagonalize A in floating point (approximate)");

    auto* verify = app.add_subcommand("verify", "Scan seeded random PSD pairs");
    verify->add_option("--n", cfg.n, "Dimension")->required();
    verify->add_option("--samples", cfg.samples, "Number of random pairs")->required();
    verify->add_option("--max-degree", cfg.max_degree, "Largest p + q")->required()->check(CLI::NonNegativeNumber);
    verify->add_option("--seed", cfg.seed, "Base seed")->required();
    verify->add_option("--magnitude", cfg.magnitude, "Bound on generated numerators and denominators");
    verify->add_option("--threads", cfg.threads, "Worker threads (output order is unaffected)");
    add_output_options(verify, cfg);

    auto* case3 = app.add_subcommand("case3", "Closed-form series for the 3x3 singular family");
    case3->add_option("--grid", cfg.grid, "Grid JSON file");
    case3->add_option("--point", cfg.point, "x,y,u,v,w,a (z is solved from det B = 0)");
    case3->add_option("--order", cfg.order, "Highest power of t")->check(CLI::NonNegativeNumber);
    case3->add_flag("--no-crosscheck", cfg.no_crosscheck, "Skip the comparison against the generic engine");
    case3->add_option("--threads", cfg.threads, "Worker threads (output order is unaffected)");
    add_output_options(case3, cfg);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitError;
    }

    const TraceProvider& provider = hooks.provider ? *hooks.provider : default_trace_provider();
    try {
        if (coeff->parsed()) return cmd_coeff(cfg, out);
        if (table->parsed()) return cmd_table(cfg, out, err, provider);
        if (asympt->parsed()) return cmd_asympt(cfg, out);
        if (verify->parsed()) return cmd_verify(cfg, out, err, provider);
        if (case3->parsed()) return cmd_case3(cfg, out, err);
    } catch (const InternalConsistencyError& e) {
        err << "internal consistency failure: " << e.what() << '\n';
        return kExitError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitError;
    }
    err << "error: no subcommand\n";
    return kExitError;
}

}  // namespace bmv::cli
