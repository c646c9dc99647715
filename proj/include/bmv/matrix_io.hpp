#pragma once

// Matrix JSON format:
//   {"n": 2, "entries": [["1", "1/2"], ["1/2", ["3", "-1/4"]]]}
// Each entry is a rational string ("p" or "p/q") or a two-element array
// ["re", "im"] of rational strings.

#include "bmv/matrix.hpp"

#include <json.hpp>

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

namespace bmv {

/// Input error carrying the source name and position in its message.
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// `source` names the origin (usually a file path) in error messages.
ExactMatrix matrix_from_json(const nlohmann::json& doc, std::string_view source);
ExactMatrix parse_matrix(std::string_view text, std::string_view source);
ExactMatrix load_matrix(const std::filesystem::path& path);

HermitianMatrix load_hermitian(const std::filesystem::path& path);

/// Real entries are written as strings, complex ones as ["re", "im"].
nlohmann::ordered_json matrix_to_json(const ExactMatrix& m);

/// Parses a JSON value that must be a rational string; `where` labels errors.
Rational rational_from_json(const nlohmann::json& value, std::string_view source, std::string_view where);

}  // namespace bmv
