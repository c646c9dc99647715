#include "bmv/matrix_io.hpp"

#include <fstream>
#include <sstream>

namespace bmv {

namespace {

[[noreturn]] void fail(std::string_view source, std::string_view where, std::string_view what)
{
    std::string msg(source);
    if (!where.empty()) msg += ": " + std::string(where);
    msg += ": " + std::string(what);
    throw ParseError(msg);
}

std::string read_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError(path.string() + ": cannot open file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

Rational rational_from_json(const nlohmann::json& value, std::string_view source, std::string_view where)
{
    if (!value.is_string()) fail(source, where, "expected a rational string such as \"3/4\"");
    try {
        return parse_rational(value.get<std::string>());
    } catch (const std::invalid_argument& e) {
        fail(source, where, e.what());
    }
}

ExactMatrix matrix_from_json(const nlohmann::json& doc, std::string_view source)
{
    if (!doc.is_object()) fail(source, "", "top level must be an object with \"n\" and \"entries\"");
    if (!doc.contains("n") || !doc["n"].is_number_integer()) fail(source, "n", "missing or not an integer");
    const auto n = doc["n"].get<long long>();
    if (n < 1) fail(source, "n", "must be a positive integer");
    if (!doc.contains("entries") || !doc["entries"].is_array()) fail(source, "entries", "missing or not an array");
    const auto& rows = doc["entries"];
    if (static_cast<long long>(rows.size()) != n)
        fail(source, "entries", "has " + std::to_string(rows.size()) + " rows, expected n = " + std::to_string(n));

    ExactMatrix m(n, n);
    for (long long i = 0; i < n; ++i) {
        const auto& row = rows[static_cast<std::size_t>(i)];
        const std::string row_label = "entries[" + std::to_string(i) + "]";
        if (!row.is_array()) fail(source, row_label, "row is not an array");
        if (static_cast<long long>(row.size()) != n)
            fail(source, row_label, "has " + std::to_string(row.size()) + " columns, expected " + std::to_string(n) +
                                        " (matrix must be square)");
        for (long long j = 0; j < n; ++j) {
            const auto& e = row[static_cast<std::size_t>(j)];
            const std::string label = row_label + "[" + std::to_string(j) + "]";
            if (e.is_array()) {
                if (e.size() != 2) fail(source, label, "complex entry must be [\"re\", \"im\"]");
                m(i, j) = Gaussian(rational_from_json(e[0], source, label + "[0]"),
                                   rational_from_json(e[1], source, label + "[1]"));
            } else {
                m(i, j) = Gaussian(rational_from_json(e, source, label));
            }
        }
    }
    return m;
}

ExactMatrix parse_matrix(std::string_view text, std::string_view source)
{
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        fail(source, "byte " + std::to_string(e.byte), "malformed JSON");
    }
    return matrix_from_json(doc, source);
}

ExactMatrix load_matrix(const std::filesystem::path& path) { return parse_matrix(read_file(path), path.string()); }

HermitianMatrix load_hermitian(const std::filesystem::path& path)
{
    ExactMatrix m = load_matrix(path);
    if (!is_hermitian(m)) throw ParseError(path.string() + ": matrix is not hermitian");
    return HermitianMatrix(std::move(m));
}

nlohmann::ordered_json matrix_to_json(const ExactMatrix& m)
{
    nlohmann::ordered_json doc;
    doc["n"] = m.rows();
    auto rows = nlohmann::ordered_json::array();
    for (Index i = 0; i < m.rows(); ++i) {
        auto row = nlohmann::ordered_json::array();
        for (Index j = 0; j < m.cols(); ++j) {
            const Gaussian& v = m(i, j);
            if (v.is_real())
                row.push_back(to_string(v.real()));
            else
                row.push_back({to_string(v.real()), to_string(v.imag())});
        }
        rows.push_back(std::move(row));
    }
    doc["entries"] = std::move(rows);
    return doc;
}

}  // namespace bmv
