#include "evdkit/pipeline.hpp"

#include <chrono>

#include "evdkit/dense.hpp"
#include "evdkit/thread_pool.hpp"

namespace evdkit {

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

PipelineResult run_tridiag_pipeline(const SymmetricMatrix& a, const PipelineConfig& cfg) {
  const int workers = cfg.workers <= 0 ? default_worker_count() : cfg.workers;
  ThreadPool::set_global_width(workers);

  DbrConfig dc;
  dc.b = cfg.b;
  dc.nb = cfg.nb;
  dc.flat_updates = cfg.flat_updates;
  dc.accumulate_q = cfg.accumulate_q;

  auto t0 = std::chrono::steady_clock::now();
  BandReductionResult stage1 = dbr(a, dc);

  auto t1 = std::chrono::steady_clock::now();
  ChaseResult stage2 = cfg.serial_chase
                           ? chase_serial(stage1.band, cfg.accumulate_q)
                           : chase_parallel(stage1.band, workers, cfg.accumulate_q);
  const double chase_s = seconds_since(t1);

  PipelineResult res{std::move(stage1.band), std::move(stage2.t), std::nullopt,
                     std::chrono::duration<double>(t1 - t0).count(), chase_s,
                     stage1.flops, stage2.flops, stage2.min_gate_margin};
  if (cfg.accumulate_q)
    res.q = OrthogonalAccumulator{matmul_nn(stage1.q->q, stage2.q->q)};
  return res;
}

}  // namespace evdkit
