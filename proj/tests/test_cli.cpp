#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bmv/cli.hpp"
#include "stub_provider.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

using namespace bmv;
namespace fs = std::filesystem;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run_cli(std::vector<std::string> args, const cli::Hooks& hooks = {})
{
    std::ostringstream out, err;
    const int code = cli::run(args, out, err, hooks);
    return {code, out.str(), err.str()};
}

/// Scratch directory holding the matrix and grid files used below.
const fs::path& scratch()
{
    static const fs::path dir = [] {
        const fs::path d = fs::temp_directory_path() / ("bmv_cli_test_" + std::to_string(::getpid()));
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

std::string write(const std::string& name, const std::string& text)
{
    const fs::path p = scratch() / name;
    std::ofstream(p, std::ios::binary) << text;
    return p.string();
}

std::string read(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

const std::string kIdentity = R"({"n": 2, "entries": [["1", "0"], ["0", "1"]]})";
const std::string kDiag10 = R"({"n": 2, "entries": [["1", "0"], ["0", "0"]]})";
const std::string kDiag01 = R"({"n": 2, "entries": [["0", "0"], ["0", "1"]]})";
const std::string kDiag21 = R"({"n": 2, "entries": [["2", "0"], ["0", "1"]]})";
const std::string kOnes = R"({"n": 2, "entries": [["1", "1"], ["1", "1"]]})";
const std::string kFull = R"({"n": 2, "entries": [["2", "1"], ["1", "1"]]})";

}  // namespace

TEST_CASE("coeff")
{
    const std::string id = write("id.json", kIdentity);
    const auto r = run_cli({"coeff", "--A", id, "--B", id, "--p", "2", "--q", "2"});
    CHECK(r.code == cli::kExitOk);
    CHECK(r.out == "12/1\napprox 1.20000000000e+01\n");

    const std::string a = write("d10.json", kDiag10);
    const std::string b = write("ones.json", kOnes);
    for (const char* engine : {"words", "recursive", "recursive_right", "toeplitz", "resolvent"})
        CHECK(run_cli({"coeff", "--A", a, "--B", b, "--p", "1", "--q", "1", "--engine", engine}).out ==
              "2/1\napprox 2.00000000000e+00\n");

    const auto big = run_cli({"coeff", "--A", a, "--B", b, "--p", "15", "--q", "15", "--engine", "words"});
    CHECK(big.code == cli::kExitError);
    CHECK(big.err.find("oracle too large") != std::string::npos);

    CHECK(run_cli({"coeff", "--A", a, "--B", b, "--p", "1", "--q", "1", "--engine", "fast"}).code == cli::kExitError);
    CHECK(run_cli({"coeff", "--A", a, "--B", b, "--p", "1"}).code == cli::kExitError);
    CHECK(run_cli({"coeff", "--A", a, "--B", b, "--p", "1", "--q", "1", "--bogus"}).code == cli::kExitError);
    CHECK(run_cli({}).code == cli::kExitError);
    CHECK(run_cli({"--help"}).code == cli::kExitOk);
}

TEST_CASE("malformed input names the file and position")
{
    const std::string bad = write("bad.json", R"({"n": 2, "entries": [["1", "0"], ["0"]]})");
    const std::string id = write("id.json", kIdentity);
    const auto r = run_cli({"table", "--A", bad, "--B", id, "--max-degree", "4"});
    CHECK(r.code == cli::kExitError);
    CHECK(r.err.find("bad.json") != std::string::npos);
    CHECK(r.err.find("entries[1]") != std::string::npos);

    const std::string broken = write("broken.json", R"({"n": 2, "entries": [)");
    const auto r2 = run_cli({"table", "--A", broken, "--B", id, "--max-degree", "4"});
    CHECK(r2.code == cli::kExitError);
    CHECK(r2.err.find("byte") != std::string::npos);

    const std::string neg = write("neg.json", R"({"n": 2, "entries": [["1", "2"], ["2", "1"]]})");
    const auto r3 = run_cli({"table", "--A", neg, "--B", id, "--max-degree", "4"});
    CHECK(r3.code == cli::kExitError);
    CHECK(r3.err.find("not PSD") != std::string::npos);

    CHECK(run_cli({"table", "--A", (scratch() / "missing.json").string(), "--B", id, "--max-degree", "4"}).code ==
          cli::kExitError);
}

TEST_CASE("table: clean pair, formats, output file")
{
    const std::string a = write("full.json", kFull);
    const std::string b = write("d21.json", kDiag21);
    const auto json = run_cli({"table", "--A", a, "--B", b, "--max-degree", "8"});
    CHECK(json.code == cli::kExitOk);
    CHECK(json.out.find("\"status\"") != std::string::npos);
    CHECK(json.out.find("elapsed") == std::string::npos);
    CHECK(json.out == run_cli({"table", "--A", a, "--B", b, "--max-degree", "8"}).out);
    CHECK(run_cli({"table", "--A", a, "--B", b, "--max-degree", "8", "--timing"}).out.find("elapsed") !=
          std::string::npos);

    const auto csv = run_cli({"table", "--A", a, "--B", b, "--max-degree", "2", "--format", "csv"});
    CHECK(csv.out.rfind("p,q,value,sign,engine\n0,0,2/1,positive,recursive\n", 0) == 0);

    const std::string path = (scratch() / "table.json").string();
    const auto file = run_cli({"table", "--A", a, "--B", b, "--max-degree", "8", "--output", path});
    CHECK(file.code == cli::kExitOk);
    CHECK(file.out.empty());
    CHECK(read(path) == json.out);
}

TEST_CASE("table: stub provider drives exit code 2")
{
    const std::string id = write("id.json", kIdentity);
    const test::StubProvider stub(3, 3, -7, -7);
    const auto r = run_cli({"table", "--A", id, "--B", id, "--max-degree", "6"}, {&stub});
    CHECK(r.code == cli::kExitViolation);
    CHECK(r.err.find("certified violation: p=3 q=3 value=-7/1") != std::string::npos);
    CHECK(r.out.find("\"violations_certified\"") != std::string::npos);

    const test::StubProvider broken(3, 3, -7, -6);
    const auto r2 = run_cli({"table", "--A", id, "--B", id, "--max-degree", "6"}, {&broken});
    CHECK(r2.code == cli::kExitError);
    CHECK(r2.err.find("internal consistency failure") != std::string::npos);
}

TEST_CASE("asympt")
{
    const std::string a = write("d21.json", kDiag21);
    const std::string id = write("id.json", kIdentity);
    const auto r = run_cli({"asympt", "--A", a, "--B", id, "--k", "2", "--epsilon", "1/10", "--max-m", "5"});
    CHECK(r.code == cli::kExitOk);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["classification"] == "TracePositive");
    CHECK(j["p"] == 1);
    CHECK(j["l"] == 1);
    CHECK(j["limit_value"] == "1/1");
    CHECK(j["estimated_N"] == 1);
    CHECK(j["ratio_sequence"][0]["ratio"] == "3/2");
    CHECK(j["ratio_sequence"][4]["ratio"] == "33/32");

    const auto zero = run_cli({"asympt", "--A", write("d10.json", kDiag10), "--B", write("d01.json", kDiag01), "--k",
                               "2", "--epsilon", "1/2", "--max-m", "5"});
    CHECK(zero.code == cli::kExitOk);
    const auto jz = nlohmann::json::parse(zero.out);
    CHECK(jz["classification"] == "TraceZero");
    CHECK(jz["ratio_sequence"].empty());
    CHECK(jz["estimated_N"].is_null());

    const std::string unsorted = write("d12.json", R"({"n": 2, "entries": [["1", "0"], ["0", "2"]]})");
    const auto bad = run_cli({"asympt", "--A", unsorted, "--B", id, "--k", "1", "--epsilon", "1/2", "--max-m", "5"});
    CHECK(bad.code == cli::kExitError);
    CHECK(bad.err.find("a_1 >= ... >= a_n >= 0") != std::string::npos);

    const auto fl = run_cli({"asympt", "--A", unsorted, "--B", id, "--k", "1", "--epsilon", "1/2", "--max-m", "5",
                             "--float-diagonalize"});
    CHECK(fl.code == cli::kExitOk);
    CHECK(fl.out.find("approximate") != std::string::npos);

    CHECK(run_cli({"asympt", "--A", a, "--B", id, "--k", "2", "--epsilon", "1", "--max-m", "5"}).code ==
          cli::kExitError);
}

TEST_CASE("verify: deterministic, thread-independent")
{
    const std::vector<std::string> args{"verify", "--n", "2", "--samples", "10", "--max-degree", "8", "--seed", "7"};
    const auto first = run_cli(args);
    CHECK(first.code == cli::kExitOk);
    CHECK(first.out == run_cli(args).out);
    auto threaded = args;
    threaded.insert(threaded.end(), {"--threads", "3"});
    CHECK(first.out == run_cli(threaded).out);

    CHECK(run_cli({"verify", "--n", "2", "--samples", "0", "--max-degree", "8", "--seed", "7"}).code ==
          cli::kExitError);
    CHECK(run_cli({"verify", "--n", "0", "--samples", "3", "--max-degree", "8", "--seed", "7"}).code ==
          cli::kExitError);

    const test::StubProvider stub(3, 3, -1, -1);
    const auto r = run_cli({"verify", "--n", "2", "--samples", "2", "--max-degree", "6", "--seed", "1"}, {&stub});
    CHECK(r.code == cli::kExitViolation);
    CHECK(r.err.find("sample=1 p=3 q=3") != std::string::npos);
}

TEST_CASE("case3")
{
    const auto r = run_cli({"case3", "--point", "1,1,1/2,1/2,1/2,1/2", "--order", "20"});
    CHECK(r.code == cli::kExitOk);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["points"][0]["coefficients"][0] == "27/4");
    CHECK(j["points"][0]["params"]["z"] == "1/1");

    const auto u0 = run_cli({"case3", "--point", "1,1,0,1/2,1/2,1/2", "--order", "5"});
    CHECK(u0.code == cli::kExitError);
    CHECK(u0.err.find("u,v,w>0 required") != std::string::npos);

    const std::string grid = write("grid.json", R"({"x": ["1"], "y": ["1"], "uvw": ["1/4", "1/2"], "a": ["0", "1"],
                                                    "order": 10})");
    const auto g = run_cli({"case3", "--grid", grid, "--format", "csv"});
    CHECK(g.code == cli::kExitOk);
    CHECK(g.out.rfind("point,m,value,sign,engine\n", 0) == 0);

    const std::string empty = write("empty.json", R"({"x": [], "y": ["1"], "uvw": ["1"], "a": ["0"]})");
    const auto e = run_cli({"case3", "--grid", empty, "--order", "5"});
    CHECK(e.code == cli::kExitError);
    CHECK(e.err.find("empty") != std::string::npos);

    CHECK(run_cli({"case3", "--point", "1,1,1/2,1/2,1/2,1/2"}).code == cli::kExitError);
    CHECK(run_cli({"case3", "--point", "1,1,1/2", "--order", "3"}).code == cli::kExitError);
}
