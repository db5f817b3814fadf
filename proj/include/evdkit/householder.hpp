#pragma once

#include <functional>
#include <vector>

#include "evdkit/dense.hpp"

namespace evdkit {

// H = I - beta * v * v^T with v[0] == 1 (stored explicitly for convenience).
// Maps the generating vector x to (alpha, 0, ..., 0)^T where
// alpha = -sign(x[0]) * ||x||_2 and sign(0) := +1.  A zero x yields beta == 0
// (identity) and alpha == 0.
struct HouseholderReflector {
  std::vector<double> v;
  double beta = 0.0;
  double alpha = 0.0;
};

HouseholderReflector house(const double* x, int m);

// Compact WY factors of an unblocked Householder QR of an m x p panel
// (m >= p >= 1): I - W Y^T = H_1 H_2 ... H_p, so (I - W Y^T)^T panel = [R; 0].
// Y is lower-trapezoidal with unit diagonal; R is p x p upper triangular.
struct PanelFactors {
  Mat w;
  Mat y;
  Mat r;
};

PanelFactors panel_qr(const Mat& panel);

// z = a_w - 0.5 * y * (w^T * a_w) where a_w = apply_a(w), evaluated exactly
// once.  apply_a must write an output of w's shape.
Mat compute_z(const std::function<void(const Mat& x, Mat& ax)>& apply_a,
              const Mat& w, const Mat& y);

}  // namespace evdkit
