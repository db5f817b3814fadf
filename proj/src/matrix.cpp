#include "evdkit/matrix.hpp"

#include <cmath>
#include <stdexcept>

#include "evdkit/prng.hpp"

namespace evdkit {

Dist dist_from_string(const std::string& s) {
  if (s == "uniform") return Dist::uniform;
  if (s == "gaussian") return Dist::gaussian;
  if (s == "wilkinson") return Dist::wilkinson;
  throw std::invalid_argument("unknown distribution: " + s);
}

std::string to_string(Dist d) {
  switch (d) {
    case Dist::uniform: return "uniform";
    case Dist::gaussian: return "gaussian";
    case Dist::wilkinson: return "wilkinson";
  }
  return "?";
}

SymmetricMatrix::SymmetricMatrix(int order) : n(order) {
  if (order <= 0) throw std::invalid_argument("SymmetricMatrix: n must be positive");
  data.assign(static_cast<std::size_t>(order) * order, 0.0);
}

BandMatrix::BandMatrix(int order, int bandwidth) : n(order), b(bandwidth) {
  if (order <= 0) throw std::invalid_argument("BandMatrix: n must be positive");
  const bool ok = bandwidth >= 1 && (bandwidth < order || order == 1);
  if (!ok) throw std::invalid_argument("BandMatrix: need 1 <= b < n");
  bands.assign(static_cast<std::size_t>(b + 1) * order, 0.0);
}

SymmetricMatrix make_symmetric(int n, std::uint64_t seed, Dist dist) {
  if (n <= 0) throw std::invalid_argument("make_symmetric: n must be positive");
  SymmetricMatrix a(n);
  if (dist == Dist::wilkinson) {
    const double mid = (n - 1) / 2.0;
    for (int i = 0; i < n; ++i) a.at(i, i) = std::fabs(i - mid);
    for (int i = 0; i + 1 < n; ++i) {
      a.at(i + 1, i) = 1.0;
      a.at(i, i + 1) = 1.0;
    }
    return a;
  }
  SplitMix64 rng(seed);
  for (int j = 0; j < n; ++j) {
    for (int i = j; i < n; ++i) {
      const double v =
          dist == Dist::uniform ? rng.uniform_pm1() : rng.gaussian();
      a.at(i, j) = v;
      a.at(j, i) = v;
    }
  }
  return a;
}

void symmetrize(SymmetricMatrix& a) {
  for (int j = 0; j < a.n; ++j)
    for (int i = j + 1; i < a.n; ++i) a.at(j, i) = a.at(i, j);
}

SymmetricMatrix densify(const BandMatrix& bm) {
  SymmetricMatrix a(bm.n);
  for (int j = 0; j < bm.n; ++j) {
    const int hi = std::min(bm.n - 1, j + bm.b);
    for (int i = j; i <= hi; ++i) {
      const double v = bm.at(i, j);
      a.at(i, j) = v;
      a.at(j, i) = v;
    }
  }
  return a;
}

SymmetricMatrix densify(const TridiagonalMatrix& t) {
  SymmetricMatrix a(t.n());
  for (int i = 0; i < t.n(); ++i) a.at(i, i) = t.d[i];
  for (int i = 0; i + 1 < t.n(); ++i) {
    a.at(i + 1, i) = t.e[i];
    a.at(i, i + 1) = t.e[i];
  }
  return a;
}

BandMatrix band_from_dense(const SymmetricMatrix& a, int b) {
  BandMatrix bm(a.n, b);
  for (int j = 0; j < a.n; ++j) {
    const int hi = std::min(a.n - 1, j + b);
    for (int i = j; i <= hi; ++i) bm.at(i, j) = a.at(i, j);
  }
  return bm;
}

TridiagonalMatrix tridiagonal_from_band(const BandMatrix& bm) {
  if (bm.b != 1 && bm.n != 1)
    throw std::invalid_argument("tridiagonal_from_band: bandwidth must be 1");
  TridiagonalMatrix t;
  t.d.resize(bm.n);
  t.e.resize(bm.n > 0 ? bm.n - 1 : 0);
  for (int j = 0; j < bm.n; ++j) t.d[j] = bm.at(j, j);
  for (int j = 0; j + 1 < bm.n; ++j) t.e[j] = bm.at(j + 1, j);
  return t;
}

double trace(const SymmetricMatrix& a) {
  double acc = 0.0;
  for (int i = 0; i < a.n; ++i) acc += a.at(i, i);
  return acc;
}

double trace(const TridiagonalMatrix& t) {
  double acc = 0.0;
  for (double v : t.d) acc += v;
  return acc;
}

double fro_norm(const SymmetricMatrix& a) {
  double acc = 0.0;
  for (double v : a.data) acc += v * v;
  return std::sqrt(acc);
}

double fro_norm(const BandMatrix& bm) {
  double acc = 0.0;
  for (int j = 0; j < bm.n; ++j) {
    const int hi = std::min(bm.n - 1, j + bm.b);
    for (int i = j; i <= hi; ++i) {
      const double v = bm.at(i, j);
      acc += (i == j) ? v * v : 2.0 * v * v;
    }
  }
  return std::sqrt(acc);
}

double fro_norm(const TridiagonalMatrix& t) {
  double acc = 0.0;
  for (double v : t.d) acc += v * v;
  for (double v : t.e) acc += 2.0 * v * v;
  return std::sqrt(acc);
}

namespace {

// R = A - M Q^T reported as ||R||_F / ||A||_F (absolute if ||A||_F == 0).
double residual_from_product(const SymmetricMatrix& a, const Mat& m,
                             const Mat& q) {
  Mat r(a.n, a.n);
  r.a = a.data;
  gemm_nt_acc(-1.0, m.a.data(), m.rows, q.a.data(), q.rows, a.n, a.n, a.n,
              r.a.data(), r.rows);
  const double na = fro_norm(a);
  const double nr = fro_norm(r);
  return na > 0.0 ? nr / na : nr;
}

}  // namespace

double similarity_residual(const SymmetricMatrix& a,
                           const OrthogonalAccumulator& q,
                           const TridiagonalMatrix& t) {
  if (a.n != q.n() || a.n != t.n())
    throw std::invalid_argument("similarity_residual: order mismatch");
  const int n = a.n;
  Mat m(n, n);  // m = Q * T, using the tridiagonal profile of T
  for (int j = 0; j < n; ++j) {
    double* mj = m.col(j);
    const double* qj = q.q.col(j);
    for (int i = 0; i < n; ++i) mj[i] = qj[i] * t.d[j];
    if (j > 0) {
      const double* ql = q.q.col(j - 1);
      for (int i = 0; i < n; ++i) mj[i] += ql[i] * t.e[j - 1];
    }
    if (j + 1 < n) {
      const double* qr = q.q.col(j + 1);
      for (int i = 0; i < n; ++i) mj[i] += qr[i] * t.e[j];
    }
  }
  return residual_from_product(a, m, q.q);
}

double similarity_residual(const SymmetricMatrix& a,
                           const OrthogonalAccumulator& q,
                           const BandMatrix& bm) {
  if (a.n != q.n() || a.n != bm.n)
    throw std::invalid_argument("similarity_residual: order mismatch");
  const SymmetricMatrix bd = densify(bm);
  Mat b(a.n, a.n);
  b.a = bd.data;
  const Mat m = matmul_nn(q.q, b);
  return residual_from_product(a, m, q.q);
}

double orthogonality_residual(const OrthogonalAccumulator& q) {
  Mat g = matmul_tn(q.q, q.q);
  for (int i = 0; i < g.rows; ++i) g(i, i) -= 1.0;
  return fro_norm(g);
}

}  // namespace evdkit
