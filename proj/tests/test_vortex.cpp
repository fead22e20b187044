#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "doctest.h"
#include "gpe/vortex.hpp"

using namespace gpe;

namespace {

// Vortices of the given charges at grid points, core size `core`.
WaveField vortex_field(const Grid& g, const std::vector<std::pair<GridPoint, int>>& vortices, double core) {
  WaveField f(g.side());
  for (std::size_t n = 1; n + 1 < g.side(); ++n)
    for (std::size_t k = 1; k + 1 < g.side(); ++k) {
      complex v{1.0, 0.0};
      for (const auto& [c, q] : vortices) {
        const double dx = g.x[n] - g.x[static_cast<std::size_t>(c.n)];
        const double dy = g.y[k] - g.y[static_cast<std::size_t>(c.k)];
        const double r = std::hypot(dx, dy);
        v *= std::tanh(r / core) * std::polar(1.0, q * std::atan2(dy, dx));
      }
      f(n, k) = v;
    }
  return f;
}

// z^q exp(-|z|^2) about the grid point c (conjugate powers for q < 0).
WaveField power_bump(const Grid& g, GridPoint c, int q) {
  WaveField f(g.side());
  for (std::size_t n = 0; n < g.side(); ++n)
    for (std::size_t k = 0; k < g.side(); ++k) {
      const complex z{g.x[n] - g.x[static_cast<std::size_t>(c.n)], g.y[k] - g.y[static_cast<std::size_t>(c.k)]};
      const complex w = q >= 0 ? z : std::conj(z);
      f(n, k) = std::pow(w, std::abs(q)) * std::exp(-std::norm(z));
    }
  return f;
}

}  // namespace

TEST_CASE("square ring order and size") {
  const auto ring = square_ring({10, 10}, 2);
  REQUIRE(ring.size() == 16);
  CHECK(ring.front() == GridPoint{12, 10});
  CHECK(ring[1] == GridPoint{12, 11});
  CHECK(ring[2] == GridPoint{12, 12});
  CHECK(ring[3] == GridPoint{11, 12});
  CHECK(ring.back() == GridPoint{12, 9});
  std::set<GridPoint> unique(ring.begin(), ring.end());
  CHECK(unique.size() == 16);
  for (GridPoint p : ring) CHECK(std::max(std::abs(p.n - 10), std::abs(p.k - 10)) == 2);
  for (std::size_t i = 0; i < ring.size(); ++i) {
    const GridPoint a = ring[i], b = ring[(i + 1) % ring.size()];
    CHECK(std::max(std::abs(a.n - b.n), std::abs(a.k - b.k)) == 1);
  }
}

TEST_CASE("winding of z^q on square rings is exact") {
  const Grid g = build_grid(3.0, 2.0, 41);
  const GridPoint c{21, 21};
  for (int q = -3; q <= 3; ++q) {
    const WaveField f = power_bump(g, c, q);
    for (int lambda = 1; lambda <= 6; ++lambda) {
      const double w = winding_number(f, square_ring(c, lambda));
      CHECK(std::abs(w - q) < 1e-12);
    }
  }
}

TEST_CASE("winding of z^q on circles is exact") {
  const Grid g = build_grid(7.0, 4.0, 255);
  const GridPoint c{128, 128};
  CHECK(g.x[128] == doctest::Approx(0.0));
  for (int q = -3; q <= 3; ++q) {
    const WaveField f = power_bump(g, c, q);
    for (double r : {0.5, 1.0, 2.5}) {
      const auto path = circle_path(g, r, 512);
      CHECK(std::abs(winding_number(f, path) - q) < 1e-12);
    }
  }
}

TEST_CASE("circle path is closed and 8-connected") {
  const Grid g = build_grid(7.0, 4.0, 127);
  const auto path = circle_path(g, 2.0, 512);
  CHECK(path.front() != path.back());
  for (std::size_t i = 0; i < path.size(); ++i) {
    const GridPoint a = path[i], b = path[(i + 1) % path.size()];
    CHECK(a != b);
    CHECK(std::max(std::abs(a.n - b.n), std::abs(a.k - b.k)) == 1);
  }
  // the first sample sits on the positive x axis
  CHECK(g.x[static_cast<std::size_t>(path.front().n)] == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("winding rejects a zero on the path") {
  const std::vector<complex> values{{1.0, 0.0}, {0.0, 0.0}, {-1.0, 0.0}};
  CHECK_THROWS_AS(winding_number(values), WindingError);
  CHECK_THROWS_AS(winding_number(std::vector<complex>{}), WindingError);
}

TEST_CASE("census finds well separated vortices with their charges") {
  const Grid g = build_grid(7.0, 4.0, 127);
  const std::vector<std::pair<GridPoint, int>> vortices{
      {{40, 40}, 1}, {{90, 50}, -1}, {{64, 90}, 2}, {{30, 95}, 1}};
  const WaveField f = vortex_field(g, vortices, 0.4);
  const auto records = vortex_census(f, VortexParams{});
  REQUIRE(records.size() == vortices.size());
  for (const auto& [c, q] : vortices) {
    const auto it = std::find_if(records.begin(), records.end(), [&](const VortexRecord& r) { return r.center == c; });
    REQUIRE(it != records.end());
    CHECK(it->index == q);
    CHECK(std::abs(it->raw - q) < 1e-9);
    CHECK_FALSE(it->flagged);
    CHECK(it->centerDensity == 0.0);
  }
  CHECK(std::is_sorted(records.begin(), records.end(),
                       [](const VortexRecord& a, const VortexRecord& b) { return a.center < b.center; }));
}

TEST_CASE("a vortex-free field has an empty census") {
  const Grid g = build_grid(7.0, 4.0, 63);
  WaveField f(g.side());
  for (auto& v : f.values()) v = complex{0.8, 0.3};
  zero_boundary(f);
  CHECK(vortex_census(f, VortexParams{}).empty());
}

TEST_CASE("flat low-density regions fail screening") {
  const Grid g = build_grid(7.0, 4.0, 63);
  WaveField f(g.side());
  for (auto& v : f.values()) v = 0.01;
  const auto candidates = find_candidates(f, 0.1);
  CHECK(candidates.size() == 63u * 63u);
  CHECK(screen_candidates(f, candidates, 0.05, 1, 3).empty());
}

TEST_CASE("screening picks the smallest contrasting ring") {
  const Grid g = build_grid(3.0, 2.0, 21);
  WaveField f(g.side());
  for (auto& v : f.values()) v = 1.0;
  // dip at (10,10) whose first ring is still low
  f(10, 10) = 0.0;
  for (GridPoint p : square_ring({10, 10}, 1)) f(p.n, p.k) = 0.2;
  const std::vector<GridPoint> c{{10, 10}};
  auto s = screen_candidates(f, c, 0.3, 1, 3);
  REQUIRE(s.size() == 1);
  CHECK(s[0].lambda == 2);
  // ring of radius 2 would leave the interior near the edge
  f(2, 2) = 0.0;
  const std::vector<GridPoint> edge{{2, 2}};
  CHECK(screen_candidates(f, edge, 0.3, 2, 3).empty());
}

TEST_CASE("isolation keeps the deepest of nearby centers") {
  std::vector<ScreenedCenter> s{{{10, 10}, 2, 0.02}, {{11, 11}, 1, 0.01}, {{20, 20}, 1, 0.05}};
  const auto kept = isolate_centers(s);
  REQUIRE(kept.size() == 2);
  CHECK(kept[0].center == GridPoint{11, 11});
  CHECK(kept[1].center == GridPoint{20, 20});
  // the denser center is removed even when only its own square holds the other
  std::vector<ScreenedCenter> t{{{10, 10}, 3, 0.01}, {{13, 10}, 1, 0.02}};
  CHECK(isolate_centers(t).size() == 1);
  std::vector<ScreenedCenter> u{{{10, 10}, 1, 0.01}, {{13, 10}, 3, 0.02}};
  CHECK(isolate_centers(u).size() == 1);
  std::vector<ScreenedCenter> v{{{10, 10}, 1, 0.01}, {{13, 10}, 2, 0.02}};
  CHECK(isolate_centers(v).size() == 2);
}

TEST_CASE("vortex parameters validate against N") {
  VortexParams p;
  CHECK_NOTHROW(p.validate(64));
  CHECK_THROWS(p.validate(6));
  p.Nmin = 4;
  CHECK_THROWS(p.validate(64));
}

TEST_CASE("giant hole index on a synthetic annulus") {
  const Grid g = build_grid(7.0, 4.0, 255);
  const double rh = 3.0, width = g.delta;
  WaveField f(g.side());
  for (std::size_t n = 1; n + 1 < g.side(); ++n)
    for (std::size_t k = 1; k + 1 < g.side(); ++k) {
      const double r = std::hypot(g.x[n], g.y[k]);
      const double amp = 0.5 * (1.0 + std::tanh((r - rh) / width));
      f(n, k) = amp * std::polar(1.0, 100.0 * std::atan2(g.y[k], g.x[n]));
    }
  HoleParams hp;
  for (double r = 0.5; r < 3.9; r += g.delta / 2) hp.radii.push_back(r);
  const HoleResult h = giant_hole_index(f, g, hp);
  CHECK(h.index == 100);
  CHECK(std::abs(h.raw - 100.0) < 1e-9);
  CHECK(std::abs(h.radius - rh) <= g.delta);

  HoleParams none;
  none.radii = {0.5, 1.0, 1.5};
  CHECK_THROWS_AS(giant_hole_index(f, g, none), WindingError);
}
