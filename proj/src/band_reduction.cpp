#include "evdkit/band_reduction.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <stdexcept>

#include "evdkit/dense.hpp"
#include "evdkit/householder.hpp"
#include "evdkit/syr2k.hpp"
#include "evdkit/thread_pool.hpp"

namespace evdkit {

namespace {

// Emits tasks in execution order: an in-order walk of the merge tree, so
// target_begin values are strictly increasing and each panel t >= 1 is the
// target_begin of exactly one task.
void recursive_tasks(int lo, int hi, const std::vector<int>& widths,
                     std::vector<PanelUpdateTask>& out) {
  if (hi - lo <= 1) return;
  const int mid = lo + (hi - lo) / 2;
  recursive_tasks(lo, mid, widths, out);
  int k = 0;
  for (int s = lo; s < mid; ++s) k += widths[s];
  out.push_back({lo, mid, mid, hi, k});
  recursive_tasks(mid, hi, widths, out);
}

PanelUpdateSchedule schedule_for_widths(const std::vector<int>& widths, bool flat) {
  PanelUpdateSchedule sched;
  const int q = static_cast<int>(widths.size());
  if (flat) {
    for (int t = 1; t < q; ++t)
      sched.tasks.push_back({t - 1, t, t, q, widths[t - 1]});
  } else {
    recursive_tasks(0, q, widths, sched.tasks);
  }
  return sched;
}

std::vector<int> panel_widths(int w, int b) {
  std::vector<int> widths;
  for (int off = 0; off < w; off += b) widths.push_back(std::min(b, w - off));
  return widths;
}

void check_schedule_args(int b, int nb) {
  if (b < 1 || nb < b || nb % b != 0)
    throw std::invalid_argument("schedule requires 1 <= b <= nb and nb % b == 0");
}

// Band of the working matrix's lower triangle.
BandMatrix band_of(const Mat& w, int b) {
  BandMatrix bm(w.rows, b);
  for (int c = 0; c < w.rows; ++c)
    for (int r = c; r < std::min(w.rows, c + b + 1); ++r) bm.at(r, c) = w(r, c);
  return bm;
}

// y += alpha * S * x for the n x n symmetric S stored in its lower triangle,
// multiple right-hand sides.  Split into a row-strip pass over the lower
// triangle and a column-strip pass over its strict transpose so each output
// entry is accumulated in a fixed order regardless of the partition.
void symm_lower_par(double alpha, const double* s, int lds, int ns,
                    const double* x, int ldx, int nx, double* y, int ldy) {
  ThreadPool& pool = ThreadPool::global();
  // Pass 1: y[r] += alpha * sum_{c <= r} S(r,c) x[c], c ascending per row.
  pool.parallel_for(0, ns, 64, [&](std::int64_t r) {
    const double* row = s + r;
    for (int j = 0; j < nx; ++j) {
      const double* xj = x + static_cast<std::size_t>(j) * ldx;
      double acc = 0.0;
      for (int c = 0; c <= r; ++c) acc += row[static_cast<std::size_t>(c) * lds] * xj[c];
      y[static_cast<std::size_t>(j) * ldy + r] += alpha * acc;
    }
  });
  // Pass 2: y[c] += alpha * sum_{r > c} S(r,c) x[r], r ascending per column.
  pool.parallel_for(0, ns, 64, [&](std::int64_t c) {
    const double* col = s + static_cast<std::size_t>(c) * lds;
    for (int j = 0; j < nx; ++j) {
      const double* xj = x + static_cast<std::size_t>(j) * ldx;
      double acc = 0.0;
      for (int r = static_cast<int>(c) + 1; r < ns; ++r) acc += col[r] * xj[r];
      y[static_cast<std::size_t>(j) * ldy + c] += alpha * acc;
    }
  });
}

}  // namespace

PanelUpdateSchedule recursive_panel_schedule(int b, int nb) {
  check_schedule_args(b, nb);
  return schedule_for_widths(panel_widths(nb, b), false);
}

PanelUpdateSchedule flat_panel_schedule(int b, int nb) {
  check_schedule_args(b, nb);
  return schedule_for_widths(panel_widths(nb, b), true);
}

BandReductionResult dbr(const SymmetricMatrix& a, const DbrConfig& cfg) {
  const int n = a.n;
  if (n < 1) throw std::invalid_argument("dbr requires n >= 1");
  if (cfg.b < 1 || cfg.nb < cfg.b || cfg.nb % cfg.b != 0 || (n >= 3 && cfg.nb >= n))
    throw std::invalid_argument("dbr requires 1 <= b <= nb < n and nb % b == 0");

  const int reducible = n - cfg.b - 1;  // columns needing reduction
  BandReductionResult res{BandMatrix(n, std::min(cfg.b, std::max(1, n - 1))),
                          std::nullopt, 0};
  if (cfg.accumulate_q) res.q = OrthogonalAccumulator::identity(n);

  Mat work(n, n);
  std::memcpy(work.a.data(), a.data.data(), sizeof(double) * a.data.size());

  if (n < 3 || reducible < 1) {
    res.band = band_of(work, res.band.b);
    return res;
  }

  const int b = cfg.b;
  const int nb = cfg.nb;
  ThreadPool& pool = ThreadPool::global();
  std::uint64_t flops = 0;

  Mat snapshot(n, n);  // trailing block at block start; lower triangle valid

  for (int c0 = 0; c0 < reducible; c0 += nb) {
    const int w = std::min(nb, reducible - c0);   // columns reduced this block
    const int f0 = c0 + b;                        // first row of the block frame
    const int mblk = n - f0;                      // frame height
    const std::vector<int> widths = panel_widths(w, b);
    const int q = static_cast<int>(widths.size());
    const PanelUpdateSchedule sched = schedule_for_widths(widths, cfg.flat_updates);

    // Pristine frame: all later products against A use this snapshot plus
    // rank-2 corrections from the factors computed so far.
    for (int c = 0; c < mblk; ++c)
      std::memcpy(snapshot.a.data() + static_cast<std::size_t>(c) * mblk + c,
                  work.col(f0 + c) + f0 + c, sizeof(double) * (mblk - c));

    Mat yblk(mblk, w);  // unit-lower factor columns, panel t at offset t*b
    Mat zblk(mblk, w);  // matching update columns: A -= Z Y^T + Y Z^T

    // Applies factor pairs [kb, kb+k) to columns [tc0, tc1), rows [col, n).
    // Columns are disjoint work items; within a column pairs are applied in
    // ascending order, so the result is partition-free.
    auto apply_pairs = [&](int tc0, int tc1, int kb, int k) {
      pool.parallel_for(tc0, tc1, 8, [&](std::int64_t ci) {
        const int c = static_cast<int>(ci);
        const int fr = c - f0;  // frame row of the column's diagonal
        double* wc = work.col(c);
        for (int j = kb; j < kb + k; ++j) {
          const double* zj = zblk.col(j);
          const double* yj = yblk.col(j);
          const double zc = zj[fr];
          const double yc = yj[fr];
          for (int r = fr; r < mblk; ++r) wc[f0 + r] -= zj[r] * yc + yj[r] * zc;
        }
      });
      std::uint64_t rows_touched = 0;
      for (int c = tc0; c < tc1; ++c) rows_touched += static_cast<std::uint64_t>(n - c);
      flops += 4ull * k * rows_touched;
    };

    std::size_t next_task = 0;
    for (int t = 0; t < q; ++t) {
      const int ct = c0 + t * b;       // first column of panel t
      const int p = widths[t];         // panel width
      const int ft = t * b;            // frame row of the panel's top
      const int mt = mblk - ft;        // panel height

      // Deferred updates whose target starts at this panel.
      while (next_task < sched.tasks.size() && sched.tasks[next_task].target_begin == t) {
        const PanelUpdateTask& task = sched.tasks[next_task++];
        int tc1 = c0 + task.target_begin * b;
        for (int tp = task.target_begin; tp < task.target_end; ++tp) tc1 += widths[tp];
        apply_pairs(c0 + task.target_begin * b, tc1, task.source_begin * b, task.k);
      }

      // Factor the panel: rows below the band, current panel columns.
      Mat panel(mt, p);
      for (int j = 0; j < p; ++j)
        std::memcpy(panel.col(j), work.col(ct + j) + ct + b, sizeof(double) * mt);
      PanelFactors fac = panel_qr(panel);
      flops += 4ull * mt * p * p;

      // Write back the reduced panel: R on the leading p rows, zeros below.
      for (int j = 0; j < p; ++j) {
        double* wc = work.col(ct + j) + ct + b;
        for (int i = 0; i < p; ++i) wc[i] = i <= j ? fac.r(i, j) : 0.0;
        std::memset(wc + p, 0, sizeof(double) * (mt - p));
      }

      // Z for the two-sided update, with A applied as the pristine snapshot
      // corrected by the pairs of the preceding panels (restricted to this
      // panel's frame rows, where the earlier factors already live).
      auto apply_a = [&](const Mat& x, Mat& ax) {
        std::fill(ax.a.begin(), ax.a.end(), 0.0);
        symm_lower_par(1.0, snapshot.a.data() + static_cast<std::size_t>(ft) * mblk + ft,
                       mblk, mt, x.a.data(), mt, p, ax.a.data(), mt);
        flops += 2ull * mt * mt * p;
        for (int s = 0; s < t; ++s) {
          const int sb = s * b;
          const int ps = widths[s];
          const double* ys = yblk.col(sb) + ft;
          const double* zs = zblk.col(sb) + ft;
          Mat tmp(ps, p);
          gemm_tn_acc(1.0, ys, mblk, x.a.data(), mt, ps, p, mt, tmp.a.data(), ps);
          gemm_nn_acc(-1.0, zs, mblk, tmp.a.data(), ps, mt, p, ps, ax.a.data(), mt);
          std::fill(tmp.a.begin(), tmp.a.end(), 0.0);
          gemm_tn_acc(1.0, zs, mblk, x.a.data(), mt, ps, p, mt, tmp.a.data(), ps);
          gemm_nn_acc(-1.0, ys, mblk, tmp.a.data(), ps, mt, p, ps, ax.a.data(), mt);
          flops += 8ull * mt * ps * p;
        }
      };
      Mat z = compute_z(apply_a, fac.w, fac.y);
      flops += 4ull * mt * p * p;

      // Stash the pair in the block frame (rows above ft stay zero).
      for (int j = 0; j < p; ++j) {
        std::memcpy(yblk.col(ft + j) + ft, fac.y.col(j), sizeof(double) * mt);
        std::memcpy(zblk.col(ft + j) + ft, z.col(j), sizeof(double) * mt);
      }

      // A ragged panel leaves a strip of columns [ct+p, ct+b) that the block
      // reduces no further: they sit left of the next frame, so the trailing
      // two-sided update never reaches them.  Catch them up on the earlier
      // panels' pairs, then apply this panel's reflectors to their rows.
      if (p < b) {
        const int strip0 = ct + p;
        const int strip1 = ct + b;  // <= n-1 because the panel is nonempty
        if (t > 0) apply_pairs(strip0, strip1, 0, ft);
        const int ws = strip1 - strip0;
        Mat m(p, ws);
        double* x = work.col(strip0) + ct + b;  // rows [ct+b, n), ld n
        gemm_tn_acc(1.0, fac.w.a.data(), mt, x, n, p, ws, mt, m.a.data(), p);
        gemm_nn_acc(-1.0, fac.y.a.data(), mt, m.a.data(), p, mt, ws, p, x, n);
        flops += 4ull * mt * p * ws;
      }

      if (res.q) {
        // Q[:, ct+b:] := Q[:, ct+b:] (I - W Y^T)
        Mat tmp(n, p);
        gemm_nn_acc(1.0, res.q->q.col(ct + b), n, fac.w.a.data(), mt, n, p, mt,
                    tmp.a.data(), n);
        gemm_nt_acc(-1.0, tmp.a.data(), n, fac.y.a.data(), mt, n, mt, p,
                    res.q->q.col(ct + b), n);
      }
    }

    // Single trailing update for the block, on the square past the last
    // panel's frame (a ragged panel's strip was finished above).
    const int ts = c0 + q * b;
    const int tn = n - ts;
    if (tn > 0) {
      const int roff = ts - f0;
      syr2k_recursive(tn, w, -1.0, zblk.col(0) + roff, mblk, yblk.col(0) + roff, mblk,
                      1.0, work.col(ts) + ts, n, std::min(nb, tn));
      flops += 2ull * tn * tn * w;
    }
  }

  res.band = band_of(work, b);
  res.flops = flops;
  return res;
}

BandReductionResult sbr(const SymmetricMatrix& a, int b, bool accumulate_q) {
  DbrConfig cfg;
  cfg.b = b;
  cfg.nb = b;
  cfg.accumulate_q = accumulate_q;
  return dbr(a, cfg);
}

TridiagDirectResult tridiag_direct(const SymmetricMatrix& a, bool accumulate_q) {
  const int n = a.n;
  TridiagDirectResult res;
  res.t.d.assign(std::max(0, n), 0.0);
  res.t.e.assign(std::max(0, n - 1), 0.0);
  if (accumulate_q) res.q = OrthogonalAccumulator::identity(n);
  if (n == 0) return res;

  Mat work(n, n);
  std::memcpy(work.a.data(), a.data.data(), sizeof(double) * a.data.size());
  std::uint64_t flops = 0;

  const int panel = 32;
  for (int c0 = 0; c0 + 2 < n; c0 += panel) {
    const int pw = std::min(panel, n - 2 - c0);
    const int mf = n - c0;  // frame rows [c0, n)
    Mat v(mf, pw), wmat(mf, pw);

    for (int j = 0; j < pw; ++j) {
      const int c = c0 + j;       // global column
      const int fr = c - c0;      // frame row of the diagonal
      double* ac = work.col(c);

      // Catch the column up on the panel's pending rank-2 updates.
      for (int s = 0; s < j; ++s) {
        const double* vs = v.col(s);
        const double* ws = wmat.col(s);
        const double vc = vs[fr], wc = ws[fr];
        for (int r = fr; r < mf; ++r) ac[c0 + r] -= vs[r] * wc + ws[r] * vc;
      }
      res.t.d[c] = ac[c];

      HouseholderReflector h = house(ac + c + 1, n - c - 1);
      res.t.e[c] = h.alpha;
      if (res.q) {
        // Q[:, c+1:] -= (Q[:, c+1:] v) (beta v)^T
        std::vector<double> qv(n, 0.0);
        gemm_nn_acc(1.0, res.q->q.col(c + 1), n, h.v.data(), n - c - 1, n, 1, n - c - 1,
                    qv.data(), n);
        gemm_nt_acc(-h.beta, qv.data(), n, h.v.data(), n - c - 1, n, n - c - 1, 1,
                    res.q->q.col(c + 1), n);
      }
      if (h.beta == 0.0) {
        for (int r = 0; r < mf; ++r) v(r, j) = 0.0;
        for (int r = 0; r < mf; ++r) wmat(r, j) = 0.0;
        continue;
      }

      // u = A v against the pristine trailing block, then correct with the
      // panel's earlier pairs; w = beta u - (beta/2)(u^T v . beta) v keeps
      // A - v w^T - w v^T equal to H A H.
      const int mt = n - c - 1;
      const int ff = c + 1 - c0;  // frame row of the trailing block
      std::vector<double> u(mt, 0.0);
      symm_lower_par(1.0, work.col(c + 1) + c + 1, n, mt, h.v.data(), mt, 1, u.data(), mt);
      flops += 2ull * mt * mt;
      for (int s = 0; s < j; ++s) {
        const double* vs = v.col(s) + ff;
        const double* ws = wmat.col(s) + ff;
        double vtv = 0.0, wtv = 0.0;
        for (int r = 0; r < mt; ++r) {
          vtv += vs[r] * h.v[r];
          wtv += ws[r] * h.v[r];
        }
        for (int r = 0; r < mt; ++r) u[r] -= vs[r] * wtv + ws[r] * vtv;
        flops += 8ull * mt;
      }
      double uv = 0.0;
      for (int r = 0; r < mt; ++r) uv += u[r] * h.v[r];
      const double gamma = 0.5 * h.beta * h.beta * uv;
      for (int r = 0; r < ff; ++r) {
        v(r, j) = 0.0;
        wmat(r, j) = 0.0;
      }
      for (int r = 0; r < mt; ++r) {
        v(ff + r, j) = h.v[r];
        wmat(ff + r, j) = h.beta * u[r] - gamma * h.v[r];
      }
    }

    // Trailing block update with the panel's accumulated pairs.
    const int te = c0 + pw;
    const int tn = n - te;
    if (tn > 0) {
      const int roff = te - c0;
      syr2k_recursive(tn, pw, -1.0, v.col(0) + roff, mf, wmat.col(0) + roff, mf, 1.0,
                      work.col(te) + te, n, std::max(64, std::min(512, tn)));
      flops += 2ull * tn * tn * pw;
    }
  }

  if (n >= 2) {
    res.t.d[n - 2] = work(n - 2, n - 2);
    res.t.e[n - 2] = work(n - 1, n - 2);
  }
  res.t.d[n - 1] = work(n - 1, n - 1);
  res.flops = flops;
  return res;
}

}  // namespace evdkit
