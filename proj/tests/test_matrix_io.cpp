#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "test_util.hpp"
#include "wproj/instances.hpp"
#include "wproj/matrix_io.hpp"

using namespace wproj;
using testutil::diff;
using testutil::mat;

namespace {

namespace fs = std::filesystem;

fs::path scratch_dir() {
  const fs::path dir = fs::current_path() / "io_test_tmp";
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

}  // namespace

TEST_CASE("canonical writes round-trip byte for byte") {
  const fs::path dir = scratch_dir();
  Rng rng(derive_seed(23, 1, 0));
  for (int trial = 0; trial < 8; ++trial) {
    Matrix m = rng.matrix(rng.index(0, 6), rng.index(0, 6));
    if (trial == 0) {
      m = mat({{0.1, {1.0 / 3.0, -0.0}}, {1e-300, 1e300}});  // awkward values
    }
    const fs::path first = dir / ("m" + std::to_string(trial) + "_a.json");
    const fs::path second = dir / ("m" + std::to_string(trial) + "_b.json");
    io::write_matrix_file(first.string(), m);
    const Matrix parsed = io::read_matrix_file(first.string());
    CHECK(diff(parsed, m) == 0.0);  // value-exact
    io::write_matrix_file(second.string(), parsed);
    CHECK(slurp(first) == slurp(second));  // byte-exact
  }
}

TEST_CASE("plain numbers promote to real entries") {
  const fs::path dir = scratch_dir();
  const fs::path path = dir / "real.json";
  {
    std::ofstream out(path);
    out << R"({"rows": 2, "cols": 2, "data": [1, 2.5, -3, [4, 5]]})";
  }
  const Matrix m = io::read_matrix_file(path.string());
  CHECK(m(0, 0) == Complex(1, 0));
  CHECK(m(0, 1) == Complex(2.5, 0));
  CHECK(m(1, 0) == Complex(-3, 0));
  CHECK(m(1, 1) == Complex(4, 5));
}

TEST_CASE("malformed documents are input errors") {
  const fs::path dir = scratch_dir();
  auto write_doc = [&](const std::string& name, const std::string& text) {
    const fs::path path = dir / name;
    std::ofstream out(path);
    out << text;
    return path.string();
  };
  CHECK_THROWS_AS(io::read_matrix_file((dir / "absent.json").string()), InputError);
  CHECK_THROWS_AS(io::read_matrix_file(write_doc("junk.json", "not json at all")), InputError);
  CHECK_THROWS_AS(io::read_matrix_file(write_doc("arr.json", "[1,2,3]")), InputError);
  CHECK_THROWS_AS(io::read_matrix_file(write_doc("nokeys.json", R"({"data": []})")), InputError);
  CHECK_THROWS_AS(
      io::read_matrix_file(write_doc("short.json", R"({"rows": 2, "cols": 2, "data": [1]})")),
      InputError);
  CHECK_THROWS_AS(
      io::read_matrix_file(write_doc("entry.json", R"({"rows": 1, "cols": 1, "data": [[1]]})")),
      InputError);
  CHECK_THROWS_AS(
      io::read_matrix_file(write_doc("neg.json", R"({"rows": -1, "cols": 0, "data": []})")),
      InputError);
  CHECK_THROWS_AS(
      io::read_matrix_file(write_doc("inf.json", R"({"rows": 1, "cols": 1, "data": [1e999]})")),
      InputError);
}

TEST_CASE("vector and subspace loading") {
  const fs::path dir = scratch_dir();
  const fs::path vecpath = dir / "vec.json";
  io::write_matrix_file(vecpath.string(), mat({{1}, {2}}));
  CHECK(io::read_vector_file(vecpath.string()).size() == 2);

  const fs::path rowpath = dir / "row.json";
  io::write_matrix_file(rowpath.string(), mat({{1, 2}}));
  CHECK_THROWS_AS(io::read_vector_file(rowpath.string()), InputError);

  const fs::path subpath = dir / "sub.json";
  io::write_matrix_file(subpath.string(), mat({{1, 2}, {1, 2}}));  // rank one generators
  CHECK(io::read_subspace_file(subpath.string()).dim() == 1);
}
