#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace evdkit {

// One benchmark/verification record.  gflops and residual are NaN when the
// stage has no flop model (eig) or no residual was computed; CSV renders NaN
// as "nan", JSON as null.
struct RunReport {
  int schema_version = 1;
  std::string stage;  // dbr | chase | eig | total | syr2k | direct
  int n = 0;
  int b = 0;   // bandwidth; inner dimension k for stage syr2k
  int nb = 0;  // block size; recursion tile for stage syr2k
  int workers = 0;
  double seconds = 0.0;
  double gflops = 0.0;
  double residual = 0.0;
  std::uint64_t seed = 0;
};

// Pinned flop models behind the reported gflops figures.
double model_flops_dbr(int n);              // (4/3) n^3
double model_flops_chase(int n, int b);     // 6 n^2 b
double model_flops_direct(int n);           // (4/3) n^3
double model_flops_syr2k(int n, int k);     // 2 n^2 k

std::string csv_header();
std::string csv_row(const RunReport& r);
std::string to_json_array(const std::vector<RunReport>& rs);  // pretty-printed

}  // namespace evdkit
