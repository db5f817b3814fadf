#include "evdkit/householder.hpp"

#include <cmath>
#include <stdexcept>

namespace evdkit {

HouseholderReflector house(const double* x, int m) {
  if (m < 1) throw std::invalid_argument("house: empty vector");
  HouseholderReflector h;
  h.v.assign(m, 0.0);
  h.v[0] = 1.0;
  double sigma = 0.0;
  for (int i = 1; i < m; ++i) sigma += x[i] * x[i];
  const double norm = std::sqrt(x[0] * x[0] + sigma);
  if (norm == 0.0) return h;  // beta = 0, identity
  h.alpha = x[0] >= 0.0 ? -norm : norm;  // -sign(x[0]) * ||x||, sign(0) = +1
  const double u0 = x[0] - h.alpha;      // no cancellation by construction
  for (int i = 1; i < m; ++i) h.v[i] = x[i] / u0;
  h.beta = 2.0 * u0 * u0 / (u0 * u0 + sigma);
  return h;
}

PanelFactors panel_qr(const Mat& panel) {
  const int m = panel.rows;
  const int p = panel.cols;
  if (p < 1 || m < p) throw std::invalid_argument("panel_qr: need m >= p >= 1");
  Mat work = panel;
  PanelFactors f{Mat(m, p), Mat(m, p), Mat(p, p)};
  std::vector<double> yv(p);  // Y(j:, 0:j)^T * v, reused per column
  for (int j = 0; j < p; ++j) {
    const int len = m - j;
    const HouseholderReflector h = house(work.col(j) + j, len);
    // Apply H from the left to the remaining columns.
    for (int c = j + 1; c < p; ++c) {
      double* col = work.col(c) + j;
      double s = 0.0;
      for (int i = 0; i < len; ++i) s += h.v[i] * col[i];
      s *= h.beta;
      for (int i = 0; i < len; ++i) col[i] -= s * h.v[i];
    }
    for (int i = 0; i < j; ++i) f.r(i, j) = work(i, j);
    f.r(j, j) = h.alpha;
    // Grow the WY pair: Y gains v, W gains beta * (v - W (Y^T v)).
    double* yj = f.y.col(j);
    for (int i = 0; i < len; ++i) yj[j + i] = h.v[i];
    for (int c = 0; c < j; ++c) {
      const double* yc = f.y.col(c) + j;
      double s = 0.0;
      for (int i = 0; i < len; ++i) s += yc[i] * h.v[i];
      yv[c] = s;
    }
    double* wj = f.w.col(j);
    for (int i = 0; i < len; ++i) wj[j + i] = h.v[i];
    for (int c = 0; c < j; ++c) {
      const double* wc = f.w.col(c);
      const double s = yv[c];
      for (int i = 0; i < m; ++i) wj[i] -= s * wc[i];
    }
    for (int i = 0; i < m; ++i) wj[i] *= h.beta;
  }
  return f;
}

Mat compute_z(const std::function<void(const Mat& x, Mat& ax)>& apply_a,
              const Mat& w, const Mat& y) {
  if (w.rows != y.rows || w.cols != y.cols)
    throw std::invalid_argument("compute_z: W and Y shapes differ");
  Mat aw(w.rows, w.cols);
  apply_a(w, aw);
  const Mat m = matmul_tn(w, aw);  // W^T (A W)
  Mat z = aw;
  gemm_nn_acc(-0.5, y.a.data(), y.rows, m.a.data(), m.rows, y.rows, m.cols,
              y.cols, z.a.data(), z.rows);
  return z;
}

}  // namespace evdkit
