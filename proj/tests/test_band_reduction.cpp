#include <doctest.h>

#include <algorithm>
#include <map>
#include <stdexcept>
#include <vector>

#include "evdkit/band_reduction.hpp"
#include "evdkit/matrix.hpp"

using namespace evdkit;

namespace {

std::map<int, int> k_histogram(const PanelUpdateSchedule& s) {
  std::map<int, int> h;
  for (const auto& t : s.tasks) h[t.k] += 1;
  return h;
}

// Every panel t must receive the pending updates of panels [0, t) exactly
// once, from tasks whose sources all precede their targets.
void check_schedule_covers(const PanelUpdateSchedule& s, int panels, int b) {
  std::vector<std::vector<int>> hits(panels);
  for (auto& h : hits) h.assign(panels, 0);
  for (const auto& t : s.tasks) {
    CHECK(t.source_begin >= 0);
    CHECK(t.source_end <= t.target_begin);
    CHECK(t.target_begin < t.target_end);
    CHECK(t.target_end <= panels);
    CHECK(t.k == (t.source_end - t.source_begin) * b);
    for (int tgt = t.target_begin; tgt < t.target_end; ++tgt)
      for (int src = t.source_begin; src < t.source_end; ++src)
        hits[tgt][src] += 1;
  }
  for (int tgt = 0; tgt < panels; ++tgt)
    for (int src = 0; src < panels; ++src)
      CHECK(hits[tgt][src] == (src < tgt ? 1 : 0));
}

}  // namespace

TEST_CASE("recursive schedule for 8 panels merges into 4+2+1 tasks") {
  PanelUpdateSchedule s = recursive_panel_schedule(32, 256);
  auto h = k_histogram(s);
  CHECK(h.size() == 3);
  CHECK(h[32] == 4);
  CHECK(h[64] == 2);
  CHECK(h[128] == 1);
  check_schedule_covers(s, 8, 32);
}

TEST_CASE("flat schedule for 8 panels is one task per panel") {
  PanelUpdateSchedule s = flat_panel_schedule(32, 256);
  auto h = k_histogram(s);
  CHECK(h.size() == 1);
  CHECK(h[32] == 7);
  check_schedule_covers(s, 8, 32);
}

TEST_CASE("schedules cover ragged panel counts") {
  for (auto [b, nb] : {std::pair{4, 4}, {4, 8}, {4, 12}, {1, 7}, {3, 15}}) {
    check_schedule_covers(recursive_panel_schedule(b, nb), nb / b, b);
    check_schedule_covers(flat_panel_schedule(b, nb), nb / b, b);
  }
}

TEST_CASE("schedule arguments are validated") {
  CHECK_THROWS_AS(recursive_panel_schedule(0, 8), std::invalid_argument);
  CHECK_THROWS_AS(recursive_panel_schedule(4, 2), std::invalid_argument);
  CHECK_THROWS_AS(recursive_panel_schedule(4, 10), std::invalid_argument);
  CHECK_THROWS_AS(flat_panel_schedule(4, 10), std::invalid_argument);
}

TEST_CASE("dbr reduces to the requested bandwidth with small residual") {
  for (auto [n, b, nb] : {std::tuple{24, 2, 8}, {33, 4, 8}, {17, 3, 6}}) {
    SymmetricMatrix a = make_symmetric(n, 77 + n, Dist::gaussian);
    DbrConfig cfg;
    cfg.b = b;
    cfg.nb = nb;
    cfg.accumulate_q = true;
    BandReductionResult r = dbr(a, cfg);
    REQUIRE(r.band.b == b);
    REQUIRE(r.q.has_value());
    CHECK(similarity_residual(a, *r.q, r.band) <= tol_orth(n));
    CHECK(orthogonality_residual(*r.q) <= tol_orth(n));
    CHECK(r.flops > 0);
  }
}

TEST_CASE("dbr with nb equal to b is bit-identical to sbr") {
  for (int b : {2, 4}) {
    SymmetricMatrix a = make_symmetric(32, 5, Dist::gaussian);
    DbrConfig cfg;
    cfg.b = b;
    cfg.nb = b;
    cfg.accumulate_q = true;
    BandReductionResult lhs = dbr(a, cfg);
    BandReductionResult rhs = sbr(a, b, true);
    CHECK(lhs.band.bands == rhs.band.bands);
    CHECK(lhs.q->q.a == rhs.q->q.a);
    CHECK(lhs.flops == rhs.flops);
  }
}

TEST_CASE("flat and merged update schedules give equivalent reductions") {
  SymmetricMatrix a = make_symmetric(40, 9, Dist::gaussian);
  DbrConfig cfg;
  cfg.b = 4;
  cfg.nb = 16;
  cfg.accumulate_q = true;
  BandReductionResult rec = dbr(a, cfg);
  cfg.flat_updates = true;
  BandReductionResult flat = dbr(a, cfg);
  CHECK(similarity_residual(a, *flat.q, flat.band) <= tol_orth(40));
  // Same transform up to rounding: the bands should agree closely.
  double dev = 0.0;
  for (std::size_t i = 0; i < rec.band.bands.size(); ++i)
    dev = std::max(dev, std::abs(rec.band.bands[i] - flat.band.bands[i]));
  CHECK(dev <= 1e-12 * fro_norm(a));
}

TEST_CASE("dbr of an already-banded matrix is a no-op") {
  // Wilkinson is tridiagonal; with b >= 1 every panel column is already zero
  // below the band, so all reflectors degenerate to the identity.
  const int n = 21;
  SymmetricMatrix a = make_symmetric(n, 0, Dist::wilkinson);
  DbrConfig cfg;
  cfg.b = 2;
  cfg.nb = 4;
  cfg.accumulate_q = true;
  BandReductionResult r = dbr(a, cfg);
  BandMatrix want = band_from_dense(a, 2);
  CHECK(r.band.bands == want.bands);
  CHECK(r.q->q.a == Mat::identity(n).a);
}

TEST_CASE("dbr handles sizes with nothing to reduce") {
  for (int n : {1, 2}) {
    SymmetricMatrix a = make_symmetric(n, 3, Dist::gaussian);
    DbrConfig cfg;
    cfg.b = 1;
    cfg.nb = 1;
    cfg.accumulate_q = true;
    BandReductionResult r = dbr(a, cfg);
    CHECK(r.band.n == n);
    CHECK(similarity_residual(a, *r.q, r.band) == 0.0);
  }
}

TEST_CASE("dbr validates its configuration") {
  SymmetricMatrix a = make_symmetric(16, 1, Dist::gaussian);
  auto run = [&](int b, int nb) {
    DbrConfig cfg;
    cfg.b = b;
    cfg.nb = nb;
    return dbr(a, cfg);
  };
  CHECK_THROWS_AS(run(0, 4), std::invalid_argument);
  CHECK_THROWS_AS(run(4, 2), std::invalid_argument);
  CHECK_THROWS_AS(run(4, 10), std::invalid_argument);  // not a multiple
  CHECK_THROWS_AS(run(4, 16), std::invalid_argument);  // nb must stay below n
  CHECK_NOTHROW(run(4, 12));
}

TEST_CASE("tridiag_direct produces an orthogonal tridiagonal factorization") {
  for (int n : {5, 16, 40}) {
    SymmetricMatrix a = make_symmetric(n, 50 + n, Dist::gaussian);
    TridiagDirectResult r = tridiag_direct(a, true);
    REQUIRE(r.t.n() == n);
    REQUIRE(r.q.has_value());
    CHECK(similarity_residual(a, *r.q, r.t) <= tol_orth(n));
    CHECK(orthogonality_residual(*r.q) <= tol_orth(n));
    CHECK(r.flops > 0);
  }
}

TEST_CASE("tridiag_direct keeps the diagonal of a tridiagonal input") {
  const int n = 21;
  SymmetricMatrix a = make_symmetric(n, 0, Dist::wilkinson);
  TridiagDirectResult r = tridiag_direct(a, true);
  for (int i = 0; i < n; ++i)
    CHECK(r.t.d[i] == doctest::Approx(a.at(i, i)).epsilon(1e-14));
  for (int i = 0; i + 1 < n; ++i)
    CHECK(std::abs(r.t.e[i]) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(similarity_residual(a, *r.q, r.t) <= tol_orth(n));
}
