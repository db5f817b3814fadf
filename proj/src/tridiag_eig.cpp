#include "evdkit/tridiag_eig.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace evdkit {

EigResult eig_qr(const TridiagonalMatrix& t, double tol) {
  const int n = t.n();
  if (n < 1) throw std::invalid_argument("eig_qr: empty matrix");
  if (!(tol > 0.0)) throw std::invalid_argument("eig_qr: tol must be positive");
  EigResult res;
  std::vector<double> d = t.d;
  std::vector<double> e = t.e;
  e.push_back(0.0);
  const int cap = 30 * n;

  auto negligible = [&](int m) {
    return std::fabs(e[m]) <= tol * (std::fabs(d[m]) + std::fabs(d[m + 1]));
  };

  for (int l = 0; l < n && res.converged; ++l) {
    for (;;) {
      int m = l;
      while (m < n - 1 && !negligible(m)) ++m;
      if (m == l) break;
      if (++res.iterations > cap) {
        res.converged = false;
        break;
      }
      // Wilkinson shift from the leading 2x2 of the unreduced block, then one
      // implicit QL sweep of plane rotations from the bottom up.
      double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
      double r = std::hypot(g, 1.0);
      g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
      double s = 1.0, c = 1.0, p = 0.0;
      int i = m - 1;
      for (; i >= l; --i) {
        double f = s * e[i];
        const double bb = c * e[i];
        r = std::hypot(f, g);
        e[i + 1] = r;
        if (r == 0.0) {  // rotation annihilated early; deflate and retry
          d[i + 1] -= p;
          e[m] = 0.0;
          break;
        }
        s = f / r;
        c = g / r;
        g = d[i + 1] - p;
        r = (d[i] - g) * s + 2.0 * c * bb;
        p = s * r;
        d[i + 1] = g + p;
        g = c * r - bb;
      }
      if (r == 0.0 && i >= l) continue;
      d[l] -= p;
      e[l] = g;
      e[m] = 0.0;
    }
  }
  std::sort(d.begin(), d.end());
  res.values = std::move(d);
  return res;
}

std::vector<double> jacobi_oracle(const SymmetricMatrix& a, double tol) {
  const int n = a.n;
  if (n < 1) throw std::invalid_argument("jacobi_oracle: empty matrix");
  if (!(tol > 0.0))
    throw std::invalid_argument("jacobi_oracle: tol must be positive");
  SymmetricMatrix w = a;

  auto off_mass = [&] {
    double acc = 0.0;
    for (int j = 0; j < n; ++j)
      for (int i = j + 1; i < n; ++i) acc += 2.0 * w.at(i, j) * w.at(i, j);
    return std::sqrt(acc);
  };
  const double target = tol * fro_norm(a);

  const int max_sweeps = 100;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    if (off_mass() <= target) {
      std::vector<double> vals(n);
      for (int i = 0; i < n; ++i) vals[i] = w.at(i, i);
      std::sort(vals.begin(), vals.end());
      return vals;
    }
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = w.at(p, q);
        if (apq == 0.0) continue;
        const double theta = (w.at(q, q) - w.at(p, p)) / (2.0 * apq);
        double tt;
        if (std::fabs(theta) > 1e150) {
          tt = 0.5 / theta;  // avoid theta*theta overflow
        } else {
          tt = std::copysign(1.0, theta) /
               (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
        }
        const double c = 1.0 / std::sqrt(tt * tt + 1.0);
        const double s = tt * c;
        w.at(p, p) -= tt * apq;
        w.at(q, q) += tt * apq;
        w.at(p, q) = 0.0;
        w.at(q, p) = 0.0;
        for (int r = 0; r < n; ++r) {
          if (r == p || r == q) continue;
          const double arp = w.at(r, p);
          const double arq = w.at(r, q);
          w.at(r, p) = c * arp - s * arq;
          w.at(p, r) = w.at(r, p);
          w.at(r, q) = s * arp + c * arq;
          w.at(q, r) = w.at(r, q);
        }
      }
    }
  }
  throw std::runtime_error("jacobi_oracle: did not reach target off-mass");
}

}  // namespace evdkit
