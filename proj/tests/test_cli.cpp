#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

#include "evdkit/io.hpp"
#include "evdkit/report.hpp"

using namespace evdkit;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
};

// Runs the benchmark binary named by EVDKIT_BIN with the given arguments,
// capturing stdout (stderr goes to /dev/null).
RunResult run_cli(const std::string& args) {
  const char* bin = std::getenv("EVDKIT_BIN");
  REQUIRE_MESSAGE(bin != nullptr, "EVDKIT_BIN must point at the CLI binary");
  const std::string cmd = std::string(bin) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  RunResult r;
  char buf[4096];
  while (std::size_t got = std::fread(buf, 1, sizeof(buf), pipe)) r.out.append(buf, got);
  const int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string first_line(const std::string& s) {
  return s.substr(0, s.find('\n'));
}

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& name) : path("/tmp/evdkit_cli_" + name) {}
  ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("tridiag smoke run verifies and exits zero") {
  RunResult r = run_cli("tridiag --n 64 --bandwidth 4 --blocksize 8 --workers 2 --seed 1 --verify");
  CHECK(r.exit_code == 0);
  CHECK(first_line(r.out) == csv_header());
  CHECK(r.out.find("1,dbr,64,4,8,2,") != std::string::npos);
  CHECK(r.out.find("1,chase,64,4,8,2,") != std::string::npos);
  CHECK(r.out.find("1,total,64,4,8,2,") != std::string::npos);
}

TEST_CASE("csv header is the pinned schema") {
  CHECK(csv_header() ==
        "schema_version,stage,n,b,nb,workers,seconds,gflops,residual,seed");
}

TEST_CASE("an order too small to reduce still succeeds") {
  RunResult r = run_cli("tridiag --n 2");
  CHECK(r.exit_code == 0);
}

TEST_CASE("bandwidth not below the order is a config error") {
  RunResult r = run_cli("tridiag --n 64 --bandwidth 64");
  CHECK(r.exit_code == 2);
}

TEST_CASE("default blocksize must fit under the order") {
  // The stock nb = 512 violates nb < n at n = 64; the caller must choose.
  RunResult r = run_cli("tridiag --n 64");
  CHECK(r.exit_code == 2);
}

TEST_CASE("unknown distribution is a config error") {
  RunResult r = run_cli("tridiag --n 32 --bandwidth 2 --blocksize 4 --dist cauchy");
  CHECK(r.exit_code == 2);
}

TEST_CASE("missing input file is an io error") {
  RunResult r = run_cli("tridiag --input /tmp/evdkit_cli_definitely_missing.symf --bandwidth 2 --blocksize 4");
  CHECK(r.exit_code == 3);
}

TEST_CASE("runs are deterministic for a fixed seed") {
  TempFile t1("det1.trid"), t2("det2.trid");
  RunResult r1 = run_cli("tridiag --n 48 --bandwidth 4 --blocksize 8 --workers 4 --seed 5 --output " + t1.path);
  RunResult r2 = run_cli("tridiag --n 48 --bandwidth 4 --blocksize 8 --workers 4 --seed 5 --output " + t2.path);
  CHECK(r1.exit_code == 0);
  CHECK(r2.exit_code == 0);
  TridiagonalMatrix a = read_trid(t1.path);
  TridiagonalMatrix b = read_trid(t2.path);
  CHECK(a.d == b.d);
  CHECK(a.e == b.e);
}

TEST_CASE("gen output feeds back through --input") {
  TempFile m("gen.symf");
  RunResult g = run_cli("gen --n 32 --seed 9 --output " + m.path);
  CHECK(g.exit_code == 0);
  SymmetricMatrix a = read_symf(m.path);
  CHECK(a.n == 32);
  RunResult r = run_cli("tridiag --input " + m.path + " --bandwidth 2 --blocksize 4 --verify");
  CHECK(r.exit_code == 0);
}

TEST_CASE("gen requires an output path") {
  RunResult r = run_cli("gen --n 8");
  CHECK(r.exit_code == 2);
}

TEST_CASE("json format emits a parseable array") {
  RunResult r = run_cli("tridiag --n 32 --bandwidth 2 --blocksize 4 --format json");
  CHECK(r.exit_code == 0);
  CHECK(first_line(r.out) == "[");
  CHECK(r.out.find("\"stage\": \"total\"") != std::string::npos);
  CHECK(r.out.rfind("]") != std::string::npos);
}

TEST_CASE("evd disagreement paths exit cleanly") {
  RunResult ok = run_cli("evd --n 32 --bandwidth 2 --blocksize 4 --oracle --seed 3");
  CHECK(ok.exit_code == 0);
  CHECK(ok.out.find("1,eig,32,2,4,") != std::string::npos);
  // The oracle is restricted to small orders.
  RunResult big = run_cli("evd --n 1024 --bandwidth 8 --blocksize 16 --oracle");
  CHECK(big.exit_code == 2);
}

TEST_CASE("verify subcommand reports per-case lines") {
  RunResult r = run_cli("verify --n 48");
  CHECK(r.exit_code == 0);
}

TEST_CASE("syr2k-bench emits one row per inner dimension") {
  RunResult r = run_cli("syr2k-bench --n 128 --seed 4");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("1,syr2k,128,16,") != std::string::npos);
  CHECK(r.out.find("1,syr2k,128,64,") != std::string::npos);
  CHECK(r.out.find("1,syr2k,128,256,") != std::string::npos);
}

TEST_CASE("help exits zero") {
  RunResult r = run_cli("--help");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("tridiag") != std::string::npos);
}

TEST_CASE("unknown subcommand is a usage error") {
  RunResult r = run_cli("frobnicate");
  CHECK(r.exit_code == 2);
}
