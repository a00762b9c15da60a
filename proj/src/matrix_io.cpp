#include "wproj/matrix_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace wproj::io {

namespace {

using nlohmann::json;

double number_from(const json& value, const char* what) {
  if (!value.is_number()) throw InputError(std::string(what) + ": expected a number");
  const double x = value.get<double>();
  if (!std::isfinite(x)) throw InputError(std::string(what) + ": non-finite number");
  return x;
}

Index count_from(const json& doc, const char* key) {
  if (!doc.contains(key) || !doc[key].is_number_integer())
    throw InputError(std::string("matrix document: missing integer '") + key + "'");
  const auto v = doc[key].get<long long>();
  if (v < 0) throw InputError(std::string("matrix document: negative '") + key + "'");
  return Index(v);
}

}  // namespace

std::string format_number(double value) {
  if (value == 0.0) return "0";  // normalize the sign of zero
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

std::string matrix_to_canonical_text(const Matrix& m) {
  ensure_finite(m);
  std::ostringstream out;
  out << "{\n";
  out << "  \"rows\": " << m.rows() << ",\n";
  out << "  \"cols\": " << m.cols() << ",\n";
  out << "  \"data\": [";
  bool first = true;
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      out << (first ? "\n" : ",\n");
      first = false;
      out << "    [" << format_number(m(i, j).real()) << ", " << format_number(m(i, j).imag())
          << "]";
    }
  }
  out << (first ? "]\n" : "\n  ]\n");
  out << "}\n";
  return out.str();
}

void write_matrix_file(const std::string& path, const Matrix& m) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot open for writing: " + path);
  out << matrix_to_canonical_text(m);
  if (!out) throw InputError("write failed: " + path);
}

Matrix parse_matrix_document(const nlohmann::json& doc) {
  if (!doc.is_object()) throw InputError("matrix document: expected an object");
  const Index rows = count_from(doc, "rows");
  const Index cols = count_from(doc, "cols");
  if (!doc.contains("data") || !doc["data"].is_array())
    throw InputError("matrix document: missing 'data' array");
  const json& data = doc["data"];
  if (Index(data.size()) != rows * cols)
    throw InputError("matrix document: data length does not match rows*cols");
  Matrix m(rows, cols);
  Index flat = 0;
  for (const json& entry : data) {
    const Index i = flat / std::max<Index>(cols, 1);
    const Index j = flat % std::max<Index>(cols, 1);
    if (entry.is_number()) {
      m(i, j) = Complex(number_from(entry, "matrix entry"), 0.0);
    } else if (entry.is_array() && entry.size() == 2) {
      m(i, j) = Complex(number_from(entry[0], "matrix entry"), number_from(entry[1], "matrix entry"));
    } else {
      throw InputError("matrix entry: expected a number or an [re, im] pair");
    }
    ++flat;
  }
  return m;
}

Matrix read_matrix_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open: " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw InputError("malformed document " + path + ": " + e.what());
  }
  return parse_matrix_document(doc);
}

nlohmann::json matrix_to_json(const Matrix& m) {
  json doc;
  doc["rows"] = m.rows();
  doc["cols"] = m.cols();
  json data = json::array();
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j) data.push_back({m(i, j).real(), m(i, j).imag()});
  doc["data"] = std::move(data);
  return doc;
}

Vector read_vector_file(const std::string& path) {
  const Matrix m = read_matrix_file(path);
  if (m.cols() != 1) throw InputError("vector file must be a single-column matrix: " + path);
  return m.col(0);
}

Subspace read_subspace_file(const std::string& path, const ToleranceConfig& tol) {
  return Subspace::span_of(read_matrix_file(path), tol);
}

}  // namespace wproj::io
