#pragma once

#include <cstdint>
#include <functional>
#include <optional>

#include "evdkit/matrix.hpp"

namespace evdkit {

// Test instrumentation: before_step runs after a sweep clears its progress
// gate and before it mutates the band, so tests can inject delays that stress
// the pipeline ordering.
struct ChaseHooks {
  std::function<void(int sweep, int step)> before_step;
};

struct ChaseResult {
  TridiagonalMatrix t;
  std::optional<OrthogonalAccumulator> q;  // B = Q * T * Q^T
  std::uint64_t flops = 0;                 // counted band work (Q excluded)
  // Smallest observed slack gcom[s-1] - (pos + 2b) over all gate passes;
  // negative would mean a sweep ran inside its predecessor's safety window.
  // INT64_MAX when no gate was ever evaluated (serial run or single sweep).
  std::int64_t min_gate_margin = 0;
};

// Band-to-tridiagonal bulge chasing, one sweep at a time.
ChaseResult chase_serial(const BandMatrix& bm, bool accumulate_q = false,
                         const ChaseHooks* hooks = nullptr);

// Pipelined chase: workers pull sweeps in order; sweep s may process position
// pos only once sweep s-1 has published progress past pos + 2b, which keeps
// concurrent windows on disjoint band columns.  Results are identical to the
// serial chase.  workers <= 0 selects the default worker count.
ChaseResult chase_parallel(const BandMatrix& bm, int workers, bool accumulate_q = false,
                           const ChaseHooks* hooks = nullptr);

}  // namespace evdkit
