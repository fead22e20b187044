#include "gpe/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace gpe {

void zero_boundary(ComplexField& f) {
  const std::size_t s = f.side();
  if (s == 0) return;
  for (std::size_t i = 0; i < s; ++i) {
    f(0, i) = f(s - 1, i) = f(i, 0) = f(i, s - 1) = complex{};
  }
}

bool has_zero_boundary(const ComplexField& f) {
  const std::size_t s = f.side();
  for (std::size_t i = 0; i < s; ++i) {
    if (f(0, i) != complex{} || f(s - 1, i) != complex{} || f(i, 0) != complex{} ||
        f(i, s - 1) != complex{})
      return false;
  }
  return true;
}

Grid build_grid(double L, double R, int N) {
  if (!(R > 0.0) || !(R < L)) throw GridError("build_grid: need 0 < R < L");
  if (N < 2) throw GridError("build_grid: need N >= 2");

  Grid g;
  g.L = L;
  g.R = R;
  g.N = N;
  g.delta = 2.0 * L / (N + 1);
  const double pi = std::numbers::pi;
  const std::size_t s = g.side();
  g.x.resize(s);
  g.xi.resize(s);
  for (std::size_t n = 0; n < s; ++n) {
    g.x[n] = -L + static_cast<double>(n) * g.delta;
    g.xi[n] = -pi * (N + 1) / (2.0 * L) + static_cast<double>(n) * pi / L;
  }
  g.y = g.x;
  g.lambda = g.xi;
  return g;
}

RadialProfile default_profile(double R) {
  return [R](double x, double y) { return std::min(1.0, 10.0 * (R * R - x * x - y * y)); };
}

ConfinementField confinement_field(const Grid& grid, const RadialProfile& rho) {
  const std::size_t s = grid.side();
  ConfinementField c{SquareMatrix<double>(s), 0.0};
  double positive = 0.0;
  for (std::size_t n = 0; n < s; ++n) {
    for (std::size_t k = 0; k < s; ++k) {
      const double v = rho(grid.x[n], grid.y[k]);
      c.values(n, k) = v;
      positive += std::max(v, 0.0);
    }
  }
  c.massTotal = grid.delta * grid.delta * positive;
  return c;
}

namespace {

struct Sampler {
  const Grid& grid;

  complex operator()(const init::CenteredGaussian&, double x, double y) const {
    return std::exp(-10.0 * x * x - 10.0 * y * y) / 5.0;
  }
  complex operator()(const init::OffsetGaussian& g, double x, double y) const {
    const double dx = x - g.cx, dy = y - g.cy;
    return std::exp(-10.0 * dx * dx - 10.0 * dy * dy) / 5.0;
  }
  complex operator()(const init::SineSum&, double x, double y) const { return std::sin(x + y); }
  complex operator()(const init::Custom& c, double x, double y) const { return c.f(x, y); }
};

}  // namespace

WaveField initial_field(const Grid& grid, const InitialKind& kind) {
  const std::size_t s = grid.side();
  WaveField f(s);
  Sampler sampler{grid};
  for (std::size_t n = 1; n + 1 < s; ++n) {
    for (std::size_t k = 1; k + 1 < s; ++k) {
      f(n, k) = std::visit([&](const auto& kd) { return sampler(kd, grid.x[n], grid.y[k]); }, kind);
    }
  }
  zero_boundary(f);
  return f;
}

int nearest_index(const Grid& grid, double v) {
  const double t = std::round((v + grid.L) / grid.delta);
  return static_cast<int>(std::clamp(t, 0.0, static_cast<double>(grid.N + 1)));
}

}  // namespace gpe
