#include "evdkit/bulge_chasing.hpp"

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <limits>
#include <memory>
#include <thread>
#include <vector>

#include "evdkit/dense.hpp"
#include "evdkit/householder.hpp"
#include "evdkit/thread_pool.hpp"

namespace evdkit {

namespace {

// Working band of width 2b: bandwidth b input plus one b-deep bulge.
// Entry (r, c), 0 <= r - c <= 2b, lives at (r - c) + c * (2b + 1); updates of
// distinct columns therefore never share memory.
struct WorkBand {
  int n = 0;
  int b = 0;
  int stride = 0;
  std::vector<double> a;

  WorkBand(const BandMatrix& bm) : n(bm.n), b(bm.b), stride(2 * bm.b + 1) {
    a.assign(static_cast<std::size_t>(stride) * n, 0.0);
    for (int c = 0; c < n; ++c)
      for (int r = c; r < std::min(n, c + b + 1); ++r) at(r, c) = bm.at(r, c);
  }
  double& at(int r, int c) { return a[(r - c) + static_cast<std::size_t>(c) * stride]; }
};

struct LoggedReflector {
  int row0 = 0;  // first row of the reflected segment
  int len = 0;
  double beta = 0.0;
  std::vector<double> v;
};

// One full sweep: eliminates column s of the band, chasing the bulge it
// creates off the bottom-right corner in steps of b columns.  gate(pos) must
// block until the predecessor sweep has published past pos + 2b; publish(p)
// exposes this sweep's own progress.  Returns the counted flops.
template <typename Gate, typename Publish>
std::uint64_t run_sweep(WorkBand& wb, int s, Gate&& gate, Publish&& publish,
                        const ChaseHooks* hooks, std::vector<LoggedReflector>* log) {
  const int n = wb.n;
  const int b = wb.b;
  std::uint64_t fl = 0;
  std::vector<double> x(b), u(b), w(b);

  for (int k = 0;; ++k) {
    const int fk = s + 1 + k * b;  // first row of this step's window
    if (fk >= n) break;
    const int lk = std::min(b, n - fk);  // window size
    if (lk < 2) break;
    const std::int64_t pos = s + static_cast<std::int64_t>(k) * b;
    gate(pos);
    if (hooks && hooks->before_step) hooks->before_step(s, k);

    // The column segment being annihilated: column s itself on the first
    // step, afterwards the bulge column one block back.
    const int gc = k == 0 ? s : fk - b;
    for (int i = 0; i < lk; ++i) x[i] = wb.at(fk + i, gc);
    HouseholderReflector h = house(x.data(), lk);
    wb.at(fk, gc) = h.alpha;
    for (int i = 1; i < lk; ++i) wb.at(fk + i, gc) = 0.0;

    if (h.beta != 0.0) {
      // The rest of the bulge block sits left of the window, columns
      // (gc, fk); the reflector acts on their rows as well.  Empty on the
      // first step, where gc is adjacent to the window.
      for (int c = gc + 1; c < fk; ++c) {
        double acc = 0.0;
        for (int i = 0; i < lk; ++i) acc += wb.at(fk + i, c) * h.v[i];
        const double scale = h.beta * acc;
        for (int i = 0; i < lk; ++i) wb.at(fk + i, c) -= scale * h.v[i];
      }

      // Two-sided update of the diagonal window J = [fk, fk+lk):
      // u = beta G v, w = u - (beta/2)(v^T u) v, G -= v w^T + w v^T.
      for (int i = 0; i < lk; ++i) {
        double acc = 0.0;
        for (int j = 0; j <= i; ++j) acc += wb.at(fk + i, fk + j) * h.v[j];
        for (int j = i + 1; j < lk; ++j) acc += wb.at(fk + j, fk + i) * h.v[j];
        u[i] = h.beta * acc;
      }
      double vu = 0.0;
      for (int i = 0; i < lk; ++i) vu += h.v[i] * u[i];
      const double half = 0.5 * h.beta * vu;
      for (int i = 0; i < lk; ++i) w[i] = u[i] - half * h.v[i];
      for (int j = 0; j < lk; ++j)
        for (int i = j; i < lk; ++i)
          wb.at(fk + i, fk + j) -= h.v[i] * w[j] + w[i] * h.v[j];

      // Rows below the window pick up the reflected columns; this writes the
      // next bulge into the lower half of the working band.
      const int r0 = fk + lk;
      const int r1 = std::min(n, fk + lk + b);
      for (int r = r0; r < r1; ++r) {
        double acc = 0.0;
        for (int j = 0; j < lk; ++j) acc += wb.at(r, fk + j) * h.v[j];
        const double scale = h.beta * acc;
        for (int j = 0; j < lk; ++j) wb.at(r, fk + j) -= scale * h.v[j];
      }
      fl += 2ull * lk * lk + 4ull * lk + 2ull * lk * (lk + 1) +
            4ull * static_cast<std::uint64_t>(r1 - r0) * lk +
            4ull * static_cast<std::uint64_t>(fk - gc - 1) * lk;
    }

    if (log) log->push_back({fk, lk, h.beta, std::move(h.v)});
    publish(s + static_cast<std::int64_t>(k + 1) * b);
  }
  // Sentinel past any reachable gate target so successors never stall on a
  // finished sweep.
  publish(static_cast<std::int64_t>(n) + 2 * b);
  return fl;
}

void replay_q(OrthogonalAccumulator& q, const std::vector<std::vector<LoggedReflector>>& logs) {
  const int n = q.q.rows;
  std::vector<double> t(n);
  for (const auto& sweep : logs) {
    for (const auto& r : sweep) {
      if (r.beta == 0.0) continue;
      // Q[:, J] -= (Q[:, J] v)(beta v)^T
      std::fill(t.begin(), t.end(), 0.0);
      gemm_nn_acc(1.0, q.q.col(r.row0), n, r.v.data(), r.len, n, 1, r.len, t.data(), n);
      gemm_nt_acc(-r.beta, t.data(), n, r.v.data(), r.len, n, r.len, 1, q.q.col(r.row0), n);
    }
  }
}

TridiagonalMatrix extract_tridiagonal(WorkBand& wb) {
  TridiagonalMatrix t;
  t.d.resize(wb.n);
  t.e.resize(std::max(0, wb.n - 1));
  for (int c = 0; c < wb.n; ++c) t.d[c] = wb.at(c, c);
  for (int c = 0; c + 1 < wb.n; ++c) t.e[c] = wb.at(c + 1, c);
  return t;
}

// b == 1 input is already tridiagonal; both drivers share this path.
ChaseResult passthrough(const BandMatrix& bm, bool accumulate_q) {
  ChaseResult res;
  res.t.d.resize(bm.n);
  res.t.e.resize(std::max(0, bm.n - 1));
  for (int c = 0; c < bm.n; ++c) res.t.d[c] = bm.at(c, c);
  for (int c = 0; c + 1 < bm.n; ++c) res.t.e[c] = bm.at(c + 1, c);
  if (accumulate_q) res.q = OrthogonalAccumulator::identity(bm.n);
  res.min_gate_margin = std::numeric_limits<std::int64_t>::max();
  return res;
}

}  // namespace

ChaseResult chase_serial(const BandMatrix& bm, bool accumulate_q, const ChaseHooks* hooks) {
  if (bm.b == 1 || bm.n < 3) return passthrough(bm, accumulate_q);
  const int sweeps = bm.n - 2;

  WorkBand wb(bm);
  std::vector<std::vector<LoggedReflector>> logs(accumulate_q ? sweeps : 0);
  ChaseResult res;
  res.min_gate_margin = std::numeric_limits<std::int64_t>::max();
  for (int s = 0; s < sweeps; ++s)
    res.flops += run_sweep(
        wb, s, [](std::int64_t) {}, [](std::int64_t) {}, hooks,
        accumulate_q ? &logs[s] : nullptr);

  res.t = extract_tridiagonal(wb);
  if (accumulate_q) {
    res.q = OrthogonalAccumulator::identity(bm.n);
    replay_q(*res.q, logs);
  }
  return res;
}

ChaseResult chase_parallel(const BandMatrix& bm, int workers, bool accumulate_q,
                           const ChaseHooks* hooks) {
  if (bm.b == 1 || bm.n < 3) return passthrough(bm, accumulate_q);
  const int n = bm.n;
  const int b = bm.b;
  const int sweeps = n - 2;

  int nw = workers <= 0 ? default_worker_count() : workers;
  nw = std::clamp(nw, 1, sweeps);

  WorkBand wb(bm);
  std::vector<std::vector<LoggedReflector>> logs(accumulate_q ? sweeps : 0);
  std::unique_ptr<std::atomic<std::int64_t>[]> gcom(new std::atomic<std::int64_t>[sweeps]);
  for (int s = 0; s < sweeps; ++s) gcom[s].store(0, std::memory_order_relaxed);
  std::atomic<int> next{0};
  std::atomic<std::uint64_t> total_flops{0};
  std::atomic<std::int64_t> min_margin{std::numeric_limits<std::int64_t>::max()};

  auto worker = [&] {
    std::int64_t local_margin = std::numeric_limits<std::int64_t>::max();
    std::uint64_t local_flops = 0;
    for (;;) {
      const int s = next.fetch_add(1, std::memory_order_relaxed);
      if (s >= sweeps) break;
      auto gate = [&](std::int64_t pos) {
        if (s == 0) return;
        const std::int64_t need = pos + 2 * b;
        std::int64_t g = gcom[s - 1].load(std::memory_order_acquire);
        while (g < need) {
          std::this_thread::yield();
          g = gcom[s - 1].load(std::memory_order_acquire);
        }
        local_margin = std::min(local_margin, g - need);
      };
      auto publish = [&](std::int64_t p) { gcom[s].store(p, std::memory_order_release); };
      local_flops += run_sweep(wb, s, gate, publish, hooks, accumulate_q ? &logs[s] : nullptr);
    }
    total_flops.fetch_add(local_flops, std::memory_order_relaxed);
    std::int64_t cur = min_margin.load(std::memory_order_relaxed);
    while (local_margin < cur &&
           !min_margin.compare_exchange_weak(cur, local_margin, std::memory_order_relaxed)) {
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(nw);
  for (int i = 0; i < nw; ++i) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  ChaseResult res;
  res.t = extract_tridiagonal(wb);
  res.flops = total_flops.load();
  res.min_gate_margin = min_margin.load();
  if (accumulate_q) {
    res.q = OrthogonalAccumulator::identity(n);
    replay_q(*res.q, logs);
  }
  return res;
}

}  // namespace evdkit
