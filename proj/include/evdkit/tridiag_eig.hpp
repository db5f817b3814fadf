#pragma once

#include <limits>
#include <vector>

#include "evdkit/matrix.hpp"

namespace evdkit {

struct EigResult {
  std::vector<double> values;  // ascending
  int iterations = 0;          // implicit-shift steps consumed
  bool converged = true;       // false once the 30*n step cap is hit
};

// Eigenvalues of a symmetric tridiagonal matrix via implicit-shift QL/QR
// sweeps with the Wilkinson shift.  An off-diagonal entry deflates when
// |e[k]| <= tol * (|d[k]| + |d[k+1]|).
EigResult eig_qr(const TridiagonalMatrix& t,
                 double tol = 4.0 * std::numeric_limits<double>::epsilon());

// Cyclic Jacobi rotations on a dense symmetric matrix until the off-diagonal
// Frobenius mass drops to tol * ||A||_F.  Independent of every reduction path
// in this library, which is what makes it usable as a cross-check; intended
// for n <= 512.  Returns ascending eigenvalues.
std::vector<double> jacobi_oracle(const SymmetricMatrix& a, double tol = 1e-13);

}  // namespace evdkit
