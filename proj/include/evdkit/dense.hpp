#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace evdkit {

// Column-major dense matrix. Leading dimension is always `rows`.
struct Mat {
  int rows = 0;
  int cols = 0;
  std::vector<double> a;

  Mat() = default;
  Mat(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c, 0.0) {}

  double& operator()(int r, int c) { return a[idx(r, c)]; }
  double operator()(int r, int c) const { return a[idx(r, c)]; }

  double* col(int c) { return a.data() + static_cast<std::size_t>(c) * rows; }
  const double* col(int c) const { return a.data() + static_cast<std::size_t>(c) * rows; }

  static Mat identity(int n) {
    Mat m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

 private:
  std::size_t idx(int r, int c) const {
    return static_cast<std::size_t>(c) * rows + r;
  }
};

// C += alpha * A * B^T.  A is m x k, B is n x k, C is m x n.
// Accumulation order over k is ascending for every C entry, so results do not
// depend on how callers partition the work.
void gemm_nt_acc(double alpha, const double* a, int lda, const double* b,
                 int ldb, int m, int n, int k, double* c, int ldc);

// C += alpha * A * B.  A is m x k, B is k x n.
void gemm_nn_acc(double alpha, const double* a, int lda, const double* b,
                 int ldb, int m, int n, int k, double* c, int ldc);

// C += alpha * A^T * B.  A is k x m, B is k x n.
void gemm_tn_acc(double alpha, const double* a, int lda, const double* b,
                 int ldb, int m, int n, int k, double* c, int ldc);

// Y += alpha * S * X where S is symmetric with only the lower triangle stored
// (lda-strided, order ns).  X and Y are ns x nx.
void symm_lower_acc(double alpha, const double* s, int lda, int ns,
                    const double* x, int ldx, int nx, double* y, int ldy);

Mat matmul_nn(const Mat& a, const Mat& b);
Mat matmul_nt(const Mat& a, const Mat& b);
Mat matmul_tn(const Mat& a, const Mat& b);

double fro_norm(const Mat& m);

}  // namespace evdkit
