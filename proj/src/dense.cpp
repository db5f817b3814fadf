#include "evdkit/dense.hpp"

#include <cmath>

namespace evdkit {

namespace {

inline std::size_t off(int r, int c, int ld) {
  return static_cast<std::size_t>(c) * ld + r;
}

}  // namespace

void gemm_nt_acc(double alpha, const double* a, int lda, const double* b,
                 int ldb, int m, int n, int k, double* c, int ldc) {
  // Four-column groups amortize the streaming of A; the k loop stays
  // ascending so each C entry sees one fixed accumulation order.
  int j = 0;
  for (; j + 4 <= n; j += 4) {
    double* c0 = c + off(0, j + 0, ldc);
    double* c1 = c + off(0, j + 1, ldc);
    double* c2 = c + off(0, j + 2, ldc);
    double* c3 = c + off(0, j + 3, ldc);
    for (int p = 0; p < k; ++p) {
      const double* ap = a + off(0, p, lda);
      const double s0 = alpha * b[off(j + 0, p, ldb)];
      const double s1 = alpha * b[off(j + 1, p, ldb)];
      const double s2 = alpha * b[off(j + 2, p, ldb)];
      const double s3 = alpha * b[off(j + 3, p, ldb)];
      for (int r = 0; r < m; ++r) {
        const double av = ap[r];
        c0[r] += s0 * av;
        c1[r] += s1 * av;
        c2[r] += s2 * av;
        c3[r] += s3 * av;
      }
    }
  }
  for (; j < n; ++j) {
    double* cj = c + off(0, j, ldc);
    for (int p = 0; p < k; ++p) {
      const double* ap = a + off(0, p, lda);
      const double s = alpha * b[off(j, p, ldb)];
      for (int r = 0; r < m; ++r) cj[r] += s * ap[r];
    }
  }
}

void gemm_nn_acc(double alpha, const double* a, int lda, const double* b,
                 int ldb, int m, int n, int k, double* c, int ldc) {
  for (int j = 0; j < n; ++j) {
    double* cj = c + off(0, j, ldc);
    const double* bj = b + off(0, j, ldb);
    for (int p = 0; p < k; ++p) {
      const double* ap = a + off(0, p, lda);
      const double s = alpha * bj[p];
      for (int r = 0; r < m; ++r) cj[r] += s * ap[r];
    }
  }
}

void gemm_tn_acc(double alpha, const double* a, int lda, const double* b,
                 int ldb, int m, int n, int k, double* c, int ldc) {
  for (int j = 0; j < n; ++j) {
    const double* bj = b + off(0, j, ldb);
    double* cj = c + off(0, j, ldc);
    for (int r = 0; r < m; ++r) {
      const double* ar = a + off(0, r, lda);
      double acc = 0.0;
      for (int p = 0; p < k; ++p) acc += ar[p] * bj[p];
      cj[r] += alpha * acc;
    }
  }
}

void symm_lower_acc(double alpha, const double* s, int lda, int ns,
                    const double* x, int ldx, int nx, double* y, int ldy) {
  for (int j = 0; j < nx; ++j) {
    const double* xj = x + off(0, j, ldx);
    double* yj = y + off(0, j, ldy);
    for (int c = 0; c < ns; ++c) {
      const double* sc = s + off(0, c, lda);
      const double xc = alpha * xj[c];
      yj[c] += sc[c] * xc;
      double acc = 0.0;
      for (int r = c + 1; r < ns; ++r) {
        yj[r] += sc[r] * xc;
        acc += sc[r] * xj[r];
      }
      yj[c] += alpha * acc;
    }
  }
}

Mat matmul_nn(const Mat& a, const Mat& b) {
  if (a.cols != b.rows) throw std::invalid_argument("matmul_nn: shape mismatch");
  Mat c(a.rows, b.cols);
  gemm_nn_acc(1.0, a.a.data(), a.rows, b.a.data(), b.rows, a.rows, b.cols,
              a.cols, c.a.data(), c.rows);
  return c;
}

Mat matmul_nt(const Mat& a, const Mat& b) {
  if (a.cols != b.cols) throw std::invalid_argument("matmul_nt: shape mismatch");
  Mat c(a.rows, b.rows);
  gemm_nt_acc(1.0, a.a.data(), a.rows, b.a.data(), b.rows, a.rows, b.rows,
              a.cols, c.a.data(), c.rows);
  return c;
}

Mat matmul_tn(const Mat& a, const Mat& b) {
  if (a.rows != b.rows) throw std::invalid_argument("matmul_tn: shape mismatch");
  Mat c(a.cols, b.cols);
  gemm_tn_acc(1.0, a.a.data(), a.rows, b.a.data(), b.rows, a.cols, b.cols,
              a.rows, c.a.data(), c.rows);
  return c;
}

double fro_norm(const Mat& m) {
  double acc = 0.0;
  for (double v : m.a) acc += v * v;
  return std::sqrt(acc);
}

}  // namespace evdkit
