#pragma once

#include <stdexcept>
#include <string>

#include "evdkit/matrix.hpp"

namespace evdkit {

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// SYMF/1: bytes "SYMF", u32 version = 1, u64 n, then n*n little-endian
// float64 values in column-major order.
void write_symf(const std::string& path, const SymmetricMatrix& a);
SymmetricMatrix read_symf(const std::string& path);

// TRID/1: bytes "TRID", u32 version = 1, u64 n, n float64 diagonal entries,
// n-1 float64 subdiagonal entries.
void write_trid(const std::string& path, const TridiagonalMatrix& t);
TridiagonalMatrix read_trid(const std::string& path);

}  // namespace evdkit
