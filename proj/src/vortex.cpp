#include "gpe/vortex.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace gpe {

void VortexParams::validate(int N) const {
  if (!(tol1 > 0.0)) throw std::invalid_argument("vortex: tol1 must be > 0");
  if (!(tol2 > 0.0)) throw std::invalid_argument("vortex: tol2 must be > 0");
  if (Nmin < 1 || Nmin > Nmax || 2 * Nmax >= N)
    throw std::invalid_argument("vortex: need 0 < Nmin <= Nmax < N/2");
}

std::vector<GridPoint> find_candidates(const WaveField& psi, double tol1) {
  std::vector<GridPoint> out;
  const int s = static_cast<int>(psi.side());
  for (int n = 1; n + 1 < s; ++n)
    for (int k = 1; k + 1 < s; ++k)
      if (std::norm(psi(n, k)) < tol1) out.push_back({n, k});
  return out;
}

std::vector<GridPoint> square_ring(GridPoint c, int lambda) {
  std::vector<GridPoint> ring;
  if (lambda < 1) return ring;
  ring.reserve(8 * static_cast<std::size_t>(lambda));
  const int l = lambda;
  for (int j = 0; j < l; ++j) ring.push_back({c.n + l, c.k + j});        // east side, upward
  for (int i = l; i > -l; --i) ring.push_back({c.n + i, c.k + l});       // north, leftward
  for (int j = l; j > -l; --j) ring.push_back({c.n - l, c.k + j});       // west, downward
  for (int i = -l; i < l; ++i) ring.push_back({c.n + i, c.k - l});       // south, rightward
  for (int j = -l; j < 0; ++j) ring.push_back({c.n + l, c.k + j});       // east, back up
  return ring;
}

namespace {

bool ring_inside(GridPoint c, int lambda, int N) {
  return c.n - lambda >= 1 && c.n + lambda <= N && c.k - lambda >= 1 && c.k + lambda <= N;
}

bool in_filled_square(GridPoint c, int lambda, GridPoint p) {
  if (p == c) return false;
  return std::abs(p.n - c.n) <= lambda && std::abs(p.k - c.k) <= lambda;
}

}  // namespace

std::vector<ScreenedCenter> screen_candidates(const WaveField& psi,
                                              std::span<const GridPoint> candidates, double tol2,
                                              int Nmin, int Nmax) {
  const int N = static_cast<int>(psi.side()) - 2;
  std::vector<ScreenedCenter> out(candidates.size());
  std::vector<char> keep(candidates.size(), 0);
#pragma omp parallel for schedule(dynamic, 16)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(candidates.size()); ++i) {
    const GridPoint c = candidates[static_cast<std::size_t>(i)];
    const double center = std::norm(psi(c.n, c.k));
    for (int lambda = Nmin; lambda <= Nmax; ++lambda) {
      if (!ring_inside(c, lambda, N)) break;
      const auto ring = square_ring(c, lambda);
      const bool contrast = std::all_of(ring.begin(), ring.end(), [&](GridPoint p) {
        return std::norm(psi(p.n, p.k)) > center + tol2;
      });
      if (contrast) {
        out[static_cast<std::size_t>(i)] = {c, lambda, center};
        keep[static_cast<std::size_t>(i)] = 1;
        break;
      }
    }
  }
  std::vector<ScreenedCenter> kept;
  for (std::size_t i = 0; i < out.size(); ++i)
    if (keep[i]) kept.push_back(out[i]);
  return kept;
}

std::vector<ScreenedCenter> isolate_centers(std::vector<ScreenedCenter> screened) {
  std::sort(screened.begin(), screened.end(), [](const ScreenedCenter& a, const ScreenedCenter& b) {
    if (a.density != b.density) return a.density < b.density;
    return a.center < b.center;
  });
  std::vector<ScreenedCenter> kept;
  for (const ScreenedCenter& c : screened) {
    const bool conflict = std::any_of(kept.begin(), kept.end(), [&](const ScreenedCenter& o) {
      return in_filled_square(o.center, o.lambda, c.center) ||
             in_filled_square(c.center, c.lambda, o.center);
    });
    if (!conflict) kept.push_back(c);
  }
  std::sort(kept.begin(), kept.end(), [](const ScreenedCenter& a, const ScreenedCenter& b) {
    return a.center < b.center;
  });
  return kept;
}

double winding_number(std::span<const complex> values) {
  if (values.empty()) throw WindingError("winding_number: empty path");
  for (const complex& v : values)
    if (v == complex{}) throw WindingError("winding_number: zero value on path, phase undefined");
  double total = 0.0;
  const std::size_t m = values.size();
  for (std::size_t i = 0; i < m; ++i) {
    // arg of v_{i+1} conj(v_i) is the phase increment already reduced to (-pi, pi]
    total += std::arg(values[(i + 1) % m] * std::conj(values[i]));
  }
  return total / (2.0 * std::numbers::pi);
}

double winding_number(const WaveField& psi, std::span<const GridPoint> path) {
  std::vector<complex> values;
  values.reserve(path.size());
  for (GridPoint p : path) values.push_back(psi(p.n, p.k));
  return winding_number(values);
}

std::vector<VortexRecord> vortex_census(const WaveField& psi, const VortexParams& params) {
  params.validate(static_cast<int>(psi.side()) - 2);
  const auto candidates = find_candidates(psi, params.tol1);
  const auto centers =
      isolate_centers(screen_candidates(psi, candidates, params.tol2, params.Nmin, params.Nmax));
  std::vector<VortexRecord> out;
  out.reserve(centers.size());
  for (const ScreenedCenter& c : centers) {
    const auto ring = square_ring(c.center, c.lambda);
    VortexRecord r;
    r.center = c.center;
    r.lambda = c.lambda;
    r.centerDensity = c.density;
    r.raw = winding_number(psi, ring);
    r.index = std::lround(r.raw);
    r.flagged = std::abs(r.raw - static_cast<double>(r.index)) >= 0.25;
    out.push_back(r);
  }
  return out;
}

std::vector<GridPoint> circle_path(const Grid& grid, double r, int m0) {
  if (m0 < 3) throw std::invalid_argument("circle_path: m0 must be >= 3");
  std::vector<GridPoint> path;
  const auto interior = [&](double v) { return std::clamp(nearest_index(grid, v), 1, grid.N); };
  for (int m = 0; m < m0; ++m) {
    const double t = 2.0 * std::numbers::pi * m / m0;
    const GridPoint p{interior(r * std::cos(t)), interior(r * std::sin(t))};
    if (path.empty() || path.back() != p) path.push_back(p);
  }
  while (path.size() > 1 && path.back() == path.front()) path.pop_back();
  return path;
}

HoleResult giant_hole_index(const WaveField& psi, const Grid& grid, const HoleParams& params) {
  require_same_side(psi.side(), grid.side(), "giant_hole_index");
  if (!std::is_sorted(params.radii.begin(), params.radii.end()))
    throw std::invalid_argument("giant_hole_index: radii must be increasing");
  for (double r : params.radii) {
    auto path = circle_path(grid, r, params.m0);
    double peak = 0.0;
    for (GridPoint p : path) peak = std::max(peak, std::norm(psi(p.n, p.k)));
    if (peak > params.tol4) {
      HoleResult res;
      res.radius = r;
      res.raw = winding_number(psi, path);
      res.index = std::lround(res.raw);
      res.path = std::move(path);
      return res;
    }
  }
  throw WindingError("giant_hole_index: no hole boundary found");
}

}  // namespace gpe
