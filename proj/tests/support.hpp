#pragma once

#include <cmath>
#include <random>

#include "gpe/energy.hpp"
#include "gpe/minimizer.hpp"
#include "gpe/reference.hpp"

namespace gpe::testing {

inline PhysicalParams two_component_params() {
  PhysicalParams p;
  p.epsilon = 0.5;
  p.delta = 1.3;
  p.Omega = 0.8;
  p.N1 = 0.6;
  p.N2 = 0.4;
  return p;
}

/// Random fields on [-2, 2]^2 with R = 1.5, projected onto the mass targets.
inline CondensateState random_state(int N, const PhysicalParams& params, std::mt19937_64& rng,
                                    double L = 2.0, double R = 1.5) {
  CondensateState st;
  st.params = params;
  st.disc = make_discretization(build_grid(L, R, N));
  for (int l = 0; l < 2; ++l) {
    WaveField f = reference::random_field(st.grid().side(), rng, true);
    st.psi[l] = params.fraction(l) > 0.0 ? project(f, st.mass_target(l), st.grid().delta)
                                         : WaveField(st.grid().side());
  }
  return st;
}

inline double reduced_energy(const CondensateState& st, bool withCentrifugal) {
  return evaluate_energy(st, withCentrifugal).report.reduced;
}

/// Central differences of the energy in every interior P and Q entry.
inline GradientPack fd_gradient(const CondensateState& st, bool withCentrifugal, double h) {
  const std::size_t N = static_cast<std::size_t>(st.grid().N);
  GradientPack out;
  CondensateState work = st;
  for (int l = 0; l < 2; ++l) {
    out.dP[l] = RealMatrix(N);
    out.dQ[l] = RealMatrix(N);
    for (std::size_t n = 1; n <= N; ++n) {
      for (std::size_t k = 1; k <= N; ++k) {
        for (int part = 0; part < 2; ++part) {
          const complex orig = work.psi[l](n, k);
          const complex step = part == 0 ? complex{h, 0.0} : complex{0.0, h};
          work.psi[l](n, k) = orig + step;
          const double up = reduced_energy(work, withCentrifugal);
          work.psi[l](n, k) = orig - step;
          const double down = reduced_energy(work, withCentrifugal);
          work.psi[l](n, k) = orig;
          (part == 0 ? out.dP[l] : out.dQ[l])(n - 1, k - 1) = (up - down) / (2.0 * h);
        }
      }
    }
  }
  return out;
}

/// max |a - b| / max |b| over all four blocks.
inline double normwise_error(const GradientPack& a, const GradientPack& b) {
  double diff = 0.0, scale = 0.0;
  auto scan = [&](const RealMatrix& x, const RealMatrix& y) {
    for (std::size_t i = 0; i < x.size(); ++i) {
      diff = std::max(diff, std::abs(x.values()[i] - y.values()[i]));
      scale = std::max(scale, std::abs(y.values()[i]));
    }
  };
  for (int l = 0; l < 2; ++l) {
    scan(a.dP[l], b.dP[l]);
    scan(a.dQ[l], b.dQ[l]);
  }
  return scale > 0.0 ? diff / scale : diff;
}

/// Density 0 inside a hole of radius r0 at the origin (and, with `second`, a small one
/// at (-2.8, 0)), 1 elsewhere; the phase winds q times about the origin.
inline CondensateState holes_state(double r0, int q, bool second) {
  PhysicalParams p;
  p.epsilon = 0.1;
  CondensateState st;
  st.params = p;
  st.disc = make_discretization(build_grid(7.0, 4.0, 127));
  const Grid& g = st.grid();
  const double w = 3.0 * g.delta;
  st.psi[0] = WaveField(g.side());
  st.psi[1] = WaveField(g.side());
  for (std::size_t n = 1; n + 1 < g.side(); ++n)
    for (std::size_t k = 1; k + 1 < g.side(); ++k) {
      double dens = 0.5 * (1.0 + std::tanh((std::hypot(g.x[n], g.y[k]) - r0) / w));
      if (second) dens *= 0.5 * (1.0 + std::tanh((std::hypot(g.x[n] + 2.8, g.y[k]) - 0.6) / w));
      st.psi[0](n, k) = std::sqrt(dens) * std::polar(1.0, q * std::atan2(g.y[k], g.x[n]));
    }
  return st;
}

}  // namespace gpe::testing
