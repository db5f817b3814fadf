#include "evdkit/syr2k.hpp"

#include <algorithm>
#include <stdexcept>

#include "evdkit/thread_pool.hpp"

namespace evdkit {

namespace {

inline std::size_t off(int r, int c, int ld) {
  return static_cast<std::size_t>(c) * ld + r;
}

// Rank-2k update of one on-diagonal block, lower triangle only, over the
// column range [j0, j1).  Per-entry accumulation runs over p ascending.
void diag_update_cols(int n0, int j0, int j1, int k, double alpha,
                      const double* a, int lda, const double* b, int ldb,
                      double* c, int ldc) {
  for (int j = j0; j < j1; ++j) {
    double* cj = c + off(0, j, ldc);
    for (int p = 0; p < k; ++p) {
      const double* ap = a + off(0, p, lda);
      const double* bp = b + off(0, p, ldb);
      const double sb = alpha * bp[j];
      const double sa = alpha * ap[j];
      for (int r = j; r < n0; ++r) cj[r] += sb * ap[r] + sa * bp[r];
    }
  }
}

}  // namespace

void gemm_batched(const GemmBatchDescriptor& d, double alpha, const double* a,
                  const double* b, double* c) {
  if (d.blocks.empty()) return;
  if (d.rows <= 0 || d.cols <= 0 || d.k <= 0)
    throw std::invalid_argument("gemm_batched: non-positive block dims");
  // Split wide blocks into column strips; strips of distinct blocks are
  // disjoint in C, so the pool can run them in any order.
  const int strip = 64;
  const int nstrips = (d.cols + strip - 1) / strip;
  const std::int64_t tasks =
      static_cast<std::int64_t>(d.blocks.size()) * nstrips;
  ThreadPool::global().parallel_for(0, tasks, 1, [&](std::int64_t t) {
    const auto& blk = d.blocks[static_cast<std::size_t>(t / nstrips)];
    const int s = static_cast<int>(t % nstrips) * strip;
    const int w = std::min(strip, d.cols - s);
    gemm_nt_acc(alpha, a + blk.a, d.lda, b + blk.b + s, d.ldb, d.rows, w, d.k,
                c + blk.c + off(0, s, d.ldc), d.ldc);
  });
}

Syr2kPlan plan_syr2k(int n, int nb, int lda, int ldb, int ldc) {
  if (n < 1 || nb < 1 || nb > n)
    throw std::invalid_argument("plan_syr2k: need 1 <= nb <= n");
  Syr2kPlan plan;
  plan.n = n;
  plan.nb = nb;
  for (int j = 0; j < n; j += nb)
    plan.diag.push_back({j, std::min(nb, n - j)});
  for (int i = 1; static_cast<long long>(i) * nb < n; i *= 2) {
    const int side = i * nb;
    std::vector<GemmBatchDescriptor> batch_set;
    GemmBatchDescriptor full;
    full.rows = side;
    full.cols = side;
    full.lda = lda;
    full.ldb = ldb;
    full.ldc = ldc;
    GemmBatchDescriptor clamped = full;  // at most one ragged block per round
    for (int g = 0;; ++g) {
      const long long r0 = (2LL * g + 1) * side;
      if (r0 >= n) break;
      const int c0 = 2 * g * side;
      const int rows = static_cast<int>(std::min<long long>(side, n - r0));
      GemmBatchDescriptor::Offsets offs{
          off(static_cast<int>(r0), 0, lda), off(c0, 0, ldb),
          off(static_cast<int>(r0), c0, ldc)};
      if (rows == side) {
        full.blocks.push_back(offs);
      } else {
        clamped.rows = rows;
        clamped.blocks.push_back(offs);
      }
    }
    if (!full.blocks.empty()) {
      full.k = 0;  // filled in by the executor; plans are shape-only
      batch_set.push_back(std::move(full));
    }
    if (!clamped.blocks.empty()) {
      clamped.k = 0;
      batch_set.push_back(std::move(clamped));
    }
    plan.rounds.push_back(std::move(batch_set));
  }
  return plan;
}

void syr2k_naive(int n, int k, double alpha, const double* a, int lda,
                 const double* b, int ldb, double beta, double* c, int ldc) {
  if (n < 1 || k < 1) throw std::invalid_argument("syr2k_naive: need n, k >= 1");
  for (int j = 0; j < n; ++j) {
    for (int i = j; i < n; ++i) {
      double acc = 0.0;
      for (int p = 0; p < k; ++p)
        acc += a[off(i, p, lda)] * b[off(j, p, ldb)] +
               b[off(i, p, ldb)] * a[off(j, p, lda)];
      double& cij = c[off(i, j, ldc)];
      cij = (beta == 0.0 ? 0.0 : beta * cij) + alpha * acc;
    }
  }
}

void syr2k_recursive(int n, int k, double alpha, const double* a, int lda,
                     const double* b, int ldb, double beta, double* c, int ldc,
                     int nb) {
  if (n < 1 || k < 1)
    throw std::invalid_argument("syr2k_recursive: need n, k >= 1");
  Syr2kPlan plan = plan_syr2k(n, std::min(nb, n), lda, ldb, ldc);
  if (beta != 1.0) {
    for (int j = 0; j < n; ++j) {
      double* cj = c + off(0, j, ldc);
      if (beta == 0.0) {
        for (int i = j; i < n; ++i) cj[i] = 0.0;
      } else {
        for (int i = j; i < n; ++i) cj[i] *= beta;
      }
    }
  }
  ThreadPool::global().parallel_for(
      0, static_cast<std::int64_t>(plan.diag.size()), 1, [&](std::int64_t t) {
        const auto& blk = plan.diag[static_cast<std::size_t>(t)];
        diag_update_cols(blk.off + blk.size, blk.off, blk.off + blk.size, k,
                         alpha, a, lda, b, ldb, c, ldc);
      });
  for (auto& round : plan.rounds) {
    // Rounds are barriers: every block of round i reads C regions that no
    // other block of the same round writes, but later rounds may not start
    // early.  Two passes realize A B^T + B A^T.
    for (auto& d : round) {
      d.k = k;
      gemm_batched(d, alpha, a, b, c);
      GemmBatchDescriptor mirror = d;  // column-0 offsets hold for either ld
      std::swap(mirror.lda, mirror.ldb);
      gemm_batched(mirror, alpha, b, a, c);
    }
  }
}

}  // namespace evdkit
