#pragma once

#include <string>

#include <json.hpp>

#include "wproj/numkernel.hpp"

namespace wproj::io {

/// Shortest exact decimal for a double (17 significant digits, %.17g).
std::string format_number(double value);

/// Canonical matrix document: {"rows": R, "cols": C, "data": [[re, im], ...]}
/// row-major, one entry per line, numbers formatted by format_number. Writing
/// the parse of a canonical document reproduces it byte for byte.
std::string matrix_to_canonical_text(const Matrix& m);

void write_matrix_file(const std::string& path, const Matrix& m);

/// Parses a matrix document. Entries may be plain numbers (promoted to a zero
/// imaginary part) or [re, im] pairs. Throws InputError on malformed input.
Matrix parse_matrix_document(const nlohmann::json& doc);
Matrix read_matrix_file(const std::string& path);

/// Matrix as a json value with [re, im] entries, for embedding in result
/// documents.
nlohmann::json matrix_to_json(const Matrix& m);

Vector read_vector_file(const std::string& path);
Subspace read_subspace_file(const std::string& path, const ToleranceConfig& tol = {});

}  // namespace wproj::io
