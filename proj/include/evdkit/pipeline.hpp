#pragma once

#include <cstdint>
#include <optional>

#include "evdkit/band_reduction.hpp"
#include "evdkit/bulge_chasing.hpp"
#include "evdkit/matrix.hpp"

namespace evdkit {

struct PipelineConfig {
  int b = 32;
  int nb = 512;
  int workers = 0;  // <= 0: default worker count
  bool flat_updates = false;
  bool serial_chase = false;
  bool accumulate_q = false;
};

struct PipelineResult {
  BandMatrix band;
  TridiagonalMatrix t;
  std::optional<OrthogonalAccumulator> q;  // A = Q * T * Q^T when accumulated
  double dbr_seconds = 0.0;
  double chase_seconds = 0.0;
  std::uint64_t dbr_flops = 0;
  std::uint64_t chase_flops = 0;
  std::int64_t chase_min_gate_margin = 0;
};

// Dense symmetric A to tridiagonal T via band form: configures the worker
// pool, times both stages, and composes the two orthogonal factors when Q is
// requested.  n < 3 degenerates to T = A with Q = I.
PipelineResult run_tridiag_pipeline(const SymmetricMatrix& a, const PipelineConfig& cfg);

}  // namespace evdkit
