#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <string>

#include "evdkit/io.hpp"
#include "evdkit/matrix.hpp"

using namespace evdkit;

namespace {

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& name) : path("/tmp/evdkit_test_" + name) {}
  ~TempFile() { std::remove(path.c_str()); }
};

void write_bytes(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

std::string read_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

}  // namespace

TEST_CASE("symmetric matrix files round-trip bit-exactly") {
  TempFile f("roundtrip.symf");
  SymmetricMatrix a = make_symmetric(17, 5, Dist::gaussian);
  write_symf(f.path, a);
  SymmetricMatrix back = read_symf(f.path);
  CHECK(back.n == a.n);
  CHECK(back.data == a.data);
}

TEST_CASE("symf header layout is fixed") {
  TempFile f("header.symf");
  SymmetricMatrix a = make_symmetric(2, 1, Dist::uniform);
  write_symf(f.path, a);
  const std::string bytes = read_bytes(f.path);
  REQUIRE(bytes.size() == 4 + 4 + 8 + 4 * sizeof(double));
  CHECK(bytes.substr(0, 4) == "SYMF");
  CHECK(bytes[4] == 1);  // little-endian u32 version
  CHECK(bytes[5] == 0);
  CHECK(bytes[8] == 2);  // little-endian u64 n
}

TEST_CASE("tridiagonal files round-trip bit-exactly") {
  TempFile f("roundtrip.trid");
  TridiagonalMatrix t;
  t.d = {1.5, -2.25, 3.0};
  t.e = {0.125, -7.0};
  write_trid(f.path, t);
  TridiagonalMatrix back = read_trid(f.path);
  CHECK(back.d == t.d);
  CHECK(back.e == t.e);
  const std::string bytes = read_bytes(f.path);
  CHECK(bytes.substr(0, 4) == "TRID");
  CHECK(bytes.size() == 4 + 4 + 8 + 5 * sizeof(double));
}

TEST_CASE("single-entry tridiagonal file has no off-diagonal payload") {
  TempFile f("single.trid");
  TridiagonalMatrix t;
  t.d = {42.0};
  write_trid(f.path, t);
  TridiagonalMatrix back = read_trid(f.path);
  CHECK(back.d == t.d);
  CHECK(back.e.empty());
}

TEST_CASE("missing files raise io errors") {
  CHECK_THROWS_AS(read_symf("/tmp/evdkit_test_does_not_exist.symf"), IoError);
  CHECK_THROWS_AS(read_trid("/tmp/evdkit_test_does_not_exist.trid"), IoError);
}

TEST_CASE("wrong magic is rejected") {
  TempFile f("magic.symf");
  SymmetricMatrix a = make_symmetric(3, 2, Dist::uniform);
  write_symf(f.path, a);
  std::string bytes = read_bytes(f.path);
  bytes[0] = 'X';
  write_bytes(f.path, bytes);
  CHECK_THROWS_AS(read_symf(f.path), IoError);
}

TEST_CASE("wrong version is rejected") {
  TempFile f("version.symf");
  SymmetricMatrix a = make_symmetric(3, 2, Dist::uniform);
  write_symf(f.path, a);
  std::string bytes = read_bytes(f.path);
  bytes[4] = 2;
  write_bytes(f.path, bytes);
  CHECK_THROWS_AS(read_symf(f.path), IoError);
}

TEST_CASE("truncated payload is rejected") {
  TempFile f("short.symf");
  SymmetricMatrix a = make_symmetric(4, 2, Dist::uniform);
  write_symf(f.path, a);
  std::string bytes = read_bytes(f.path);
  write_bytes(f.path, bytes.substr(0, bytes.size() - 9));
  CHECK_THROWS_AS(read_symf(f.path), IoError);

  TempFile g("short.trid");
  TridiagonalMatrix t;
  t.d = {1.0, 2.0};
  t.e = {3.0};
  write_trid(g.path, t);
  std::string tb = read_bytes(g.path);
  write_bytes(g.path, tb.substr(0, tb.size() - 1));
  CHECK_THROWS_AS(read_trid(g.path), IoError);
}

TEST_CASE("trailing garbage is rejected") {
  TempFile f("long.symf");
  SymmetricMatrix a = make_symmetric(3, 2, Dist::uniform);
  write_symf(f.path, a);
  std::string bytes = read_bytes(f.path);
  write_bytes(f.path, bytes + "extra");
  CHECK_THROWS_AS(read_symf(f.path), IoError);
}

TEST_CASE("absurd declared sizes are rejected, not allocated") {
  TempFile f("huge.symf");
  std::string bytes = "SYMF";
  bytes += std::string("\x01\x00\x00\x00", 4);
  bytes += std::string("\xff\xff\xff\xff\xff\xff\xff\x7f", 8);  // n = 2^63-1
  write_bytes(f.path, bytes);
  CHECK_THROWS_AS(read_symf(f.path), IoError);
}
