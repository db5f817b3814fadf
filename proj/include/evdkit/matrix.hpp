#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "evdkit/dense.hpp"

namespace evdkit {

enum class Dist { uniform, gaussian, wilkinson };

Dist dist_from_string(const std::string& s);
std::string to_string(Dist d);

// Dense symmetric matrix, column-major FP64, both triangles stored.
struct SymmetricMatrix {
  int n = 0;
  std::vector<double> data;  // n*n, column-major

  SymmetricMatrix() = default;
  explicit SymmetricMatrix(int order);

  double& at(int i, int j) { return data[static_cast<std::size_t>(j) * n + i]; }
  double at(int i, int j) const {
    return data[static_cast<std::size_t>(j) * n + i];
  }
};

// Symmetric band matrix, lower storage: entry (i, j) with 0 <= i-j <= b lives
// at bands[(i-j) + j*(b+1)].  Slots past the matrix edge stay zero.
// Requires 1 <= b < n, except the degenerate n == 1 where b == 1 is allowed.
struct BandMatrix {
  int n = 0;
  int b = 0;
  std::vector<double> bands;  // (b+1) * n

  BandMatrix() = default;
  BandMatrix(int order, int bandwidth);

  double& at(int i, int j) {
    return bands[static_cast<std::size_t>(j) * (b + 1) + (i - j)];
  }
  double at(int i, int j) const {
    return bands[static_cast<std::size_t>(j) * (b + 1) + (i - j)];
  }
};

struct TridiagonalMatrix {
  std::vector<double> d;  // n diagonal entries
  std::vector<double> e;  // n-1 subdiagonal entries

  int n() const { return static_cast<int>(d.size()); }
};

// Explicit n x n orthogonal factor built up by applying reflectors.
struct OrthogonalAccumulator {
  Mat q;

  int n() const { return q.rows; }
  static OrthogonalAccumulator identity(int order) {
    return OrthogonalAccumulator{Mat::identity(order)};
  }
};

// Deterministic random symmetric matrix: lower triangle drawn column by
// column from SplitMix64(seed), mirrored exactly.  wilkinson ignores the
// seed and embeds the classic tridiagonal test matrix
// (d[i] = |i - (n-1)/2|, e = 1) in dense storage.
SymmetricMatrix make_symmetric(int n, std::uint64_t seed, Dist dist);

// Copies the lower triangle over the upper one.
void symmetrize(SymmetricMatrix& a);

SymmetricMatrix densify(const BandMatrix& bm);
SymmetricMatrix densify(const TridiagonalMatrix& t);

// Extracts the band of a dense symmetric matrix (reads the lower triangle).
BandMatrix band_from_dense(const SymmetricMatrix& a, int b);

// Reads d and e straight out of band storage; requires b == 1 (or n == 1).
TridiagonalMatrix tridiagonal_from_band(const BandMatrix& bm);

double trace(const SymmetricMatrix& a);
double trace(const TridiagonalMatrix& t);

double fro_norm(const SymmetricMatrix& a);
double fro_norm(const BandMatrix& bm);
double fro_norm(const TridiagonalMatrix& t);

// ||A - Q T Q^T||_F / ||A||_F  (zero matrix A yields absolute residual).
double similarity_residual(const SymmetricMatrix& a,
                           const OrthogonalAccumulator& q,
                           const TridiagonalMatrix& t);

// Same, against a band matrix.
double similarity_residual(const SymmetricMatrix& a,
                           const OrthogonalAccumulator& q,
                           const BandMatrix& bm);

// ||Q^T Q - I||_F
double orthogonality_residual(const OrthogonalAccumulator& q);

// Orthogonality acceptance threshold used throughout: 100 * n * eps.
inline double tol_orth(int n) {
  return 100.0 * n * std::numeric_limits<double>::epsilon();
}

}  // namespace evdkit
