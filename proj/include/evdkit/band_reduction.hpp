#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "evdkit/matrix.hpp"

namespace evdkit {

// Dense-to-band reduction parameters.  b is the target bandwidth, nb the
// block width of the deferred trailing update; nb must be a multiple of b and
// b <= nb < n (checked only when there is anything to reduce).
struct DbrConfig {
  int b = 32;
  int nb = 512;
  bool flat_updates = false;  // per-panel updates instead of merged ones
  bool accumulate_q = false;
};

// One deferred update: apply the factor pairs of panels
// [source_begin, source_end) to the columns of panels
// [target_begin, target_end) as a single rank-2k correction.
struct PanelUpdateTask {
  int source_begin = 0;
  int source_end = 0;
  int target_begin = 0;
  int target_end = 0;
  int k = 0;  // total factor columns across the source panels
};

struct PanelUpdateSchedule {
  std::vector<PanelUpdateTask> tasks;
};

// Pairwise-merging schedule: within a block of nb/b panels, pending updates
// reach a panel in log-depth tasks of inner dimension b, 2b, 4b, ...
// Preconditions: 1 <= b <= nb and nb % b == 0.
PanelUpdateSchedule recursive_panel_schedule(int b, int nb);

// One task per panel, all with inner dimension b.
PanelUpdateSchedule flat_panel_schedule(int b, int nb);

struct BandReductionResult {
  BandMatrix band;
  std::optional<OrthogonalAccumulator> q;  // A = Q * B * Q^T
  std::uint64_t flops = 0;                 // counted reduction flops (Q excluded)
};

// Two-stage step one: dense symmetric to band form of bandwidth cfg.b.
// Panels of width b are factored with compact-WY QR; their two-sided updates
// reach the rest of the current nb block through the panel schedule and the
// trailing matrix through a single rank-2*nb syr2k per block.
// n < 3, or b >= n-1, reduces nothing and returns the input's band.
BandReductionResult dbr(const SymmetricMatrix& a, const DbrConfig& cfg);

// Single-stage blocked reduction: identical code path to dbr with nb == b.
BandReductionResult sbr(const SymmetricMatrix& a, int b, bool accumulate_q = false);

struct TridiagDirectResult {
  TridiagonalMatrix t;
  std::optional<OrthogonalAccumulator> q;
  std::uint64_t flops = 0;
};

// One-stage blocked Householder tridiagonalization; per-column work is a
// symmetric matrix-vector product against the pristine trailing block plus
// rank-2 corrections, with one rank-2*nb trailing update per panel.
// Serves as the classical baseline for the two-stage pipeline.
TridiagDirectResult tridiag_direct(const SymmetricMatrix& a, bool accumulate_q);

}  // namespace evdkit
