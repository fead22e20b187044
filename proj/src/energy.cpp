#include "gpe/energy.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace gpe {

namespace {

// Sum of row(n) over n = first..last-1. Rows are evaluated in parallel and then
// added in index order, so the result does not depend on the thread count.
template <class RowFn>
double ordered_row_sum(std::size_t first, std::size_t last, RowFn&& row) {
  std::vector<double> partial(last > first ? last - first : 0, 0.0);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t n = static_cast<std::ptrdiff_t>(first); n < static_cast<std::ptrdiff_t>(last);
       ++n)
    partial[static_cast<std::size_t>(n) - first] = row(static_cast<std::size_t>(n));
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

double kinetic_from(const ComplexField& dx, const ComplexField& dy, double spacing) {
  const std::size_t s = dx.side();
  const double sum = ordered_row_sum(0, s, [&](std::size_t n) {
    double acc = 0.0;
    for (std::size_t k = 0; k < s; ++k) acc += std::norm(dx(n, k)) + std::norm(dy(n, k));
    return acc;
  });
  return 0.5 * spacing * spacing * sum;
}

double rotational_from(const Grid& g, const WaveField& psi, const ComplexField& dx,
                       const ComplexField& dy, double Omega) {
  const std::size_t s = psi.side();
  // Re(-i conj(psi) * a) = Im(conj(psi) * a)
  const double sum = ordered_row_sum(0, s, [&](std::size_t n) {
    double acc = 0.0;
    for (std::size_t k = 0; k < s; ++k) {
      const complex a = -g.y[k] * dx(n, k) + g.x[n] * dy(n, k);
      acc += (std::conj(psi(n, k)) * a).imag();
    }
    return acc;
  });
  return -Omega * g.delta * g.delta * sum;
}

struct ConfinementParts {
  double full = 0.0;      // literal sum including the rho^2 offset
  double offset = 0.0;
  double variable = 0.0;  // full - offset, accumulated directly
};

ConfinementParts confinement_parts(const WaveField& psi1, const WaveField& psi2, double eps,
                                   double delta_c, const SquareMatrix<double>& rho,
                                   double spacing) {
  if (!(eps > 0.0)) throw std::invalid_argument("confinement energy: epsilon must be > 0");
  require_same_side(psi1.side(), psi2.side(), "confinement_energy");
  require_same_side(psi1.side(), rho.side(), "confinement_energy");
  const std::size_t s = psi1.side();
  std::vector<std::array<double, 4>> rows(s);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t ni = 0; ni < static_cast<std::ptrdiff_t>(s); ++ni) {
    const auto n = static_cast<std::size_t>(ni);
    double sq = 0.0, off = 0.0, var = 0.0, cross = 0.0;
    for (std::size_t k = 0; k < s; ++k) {
      const double a = std::norm(psi1(n, k));
      const double b = std::norm(psi2(n, k));
      const double r = rho(n, k);
      const double dens = a + b;
      sq += (r - dens) * (r - dens);
      off += r * r;
      var += dens * (dens - 2.0 * r);
      cross += a * b;
    }
    rows[n] = {sq, off, var, cross};
  }
  std::array<double, 4> t{};
  for (const auto& r : rows)
    for (int i = 0; i < 4; ++i) t[i] += r[i];

  const double d2 = spacing * spacing;
  const double quad = d2 / (4.0 * eps * eps);
  const double coupling = d2 * (delta_c - 1.0) / (2.0 * eps * eps);
  return {quad * t[0] + coupling * t[3], quad * t[1], quad * t[2] + coupling * t[3]};
}

double centrifugal_from(const Discretization& d, const CondensateState& st, double Omega) {
  const std::size_t s = d.grid.side();
  const double sum = ordered_row_sum(0, s, [&](std::size_t n) {
    double acc = 0.0;
    for (std::size_t k = 0; k < s; ++k)
      acc += d.r2(n, k) * (std::norm(st.psi[0](n, k)) + std::norm(st.psi[1](n, k)));
    return acc;
  });
  return 0.5 * Omega * Omega * d.grid.delta * d.grid.delta * sum;
}

bool is_zero(const ComplexField& f) {
  for (const complex& v : f.values())
    if (v != complex{}) return false;
  return true;
}

void check_state(const CondensateState& st) {
  if (!st.disc) throw std::invalid_argument("state has no discretization");
  const std::size_t s = st.disc->grid.side();
  require_same_side(st.psi[0].side(), s, "state psi1");
  require_same_side(st.psi[1].side(), s, "state psi2");
}

}  // namespace

void PhysicalParams::validate() const {
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be > 0");
  if (!(delta >= 0.0)) throw std::invalid_argument("delta must be >= 0");
  if (!(N1 >= 0.0) || !(N2 >= 0.0)) throw std::invalid_argument("N1, N2 must be >= 0");
  if (std::abs(N1 + N2 - 1.0) > 1e-12) throw std::invalid_argument("N1 + N2 must equal 1");
  if (!std::isfinite(Omega)) throw std::invalid_argument("Omega must be finite");
}

std::shared_ptr<const Discretization> make_discretization(const Grid& grid,
                                                          const RadialProfile& rho) {
  auto d = std::make_shared<Discretization>();
  d->grid = grid;
  d->confinement = confinement_field(grid, rho);
  d->profile = rho;
  d->ops = std::make_shared<SpectralOps>(grid);
  const std::size_t s = grid.side();
  d->r2 = SquareMatrix<double>(s);
  for (std::size_t n = 0; n < s; ++n)
    for (std::size_t k = 0; k < s; ++k) d->r2(n, k) = grid.x[n] * grid.x[n] + grid.y[k] * grid.y[k];
  return d;
}

double inner_product(const ComplexField& u, const ComplexField& v) {
  require_same_side(u.side(), v.side(), "inner_product");
  const std::size_t s = u.side();
  if (s < 3) return 0.0;
  return ordered_row_sum(1, s - 1, [&](std::size_t n) {
    double acc = 0.0;
    for (std::size_t k = 1; k + 1 < s; ++k)
      acc += u(n, k).real() * v(n, k).real() + u(n, k).imag() * v(n, k).imag();
    return acc;
  });
}

double norm_delta_sq(const ComplexField& v, double spacing) {
  return spacing * spacing * inner_product(v, v);
}

double kinetic_energy(const SpectralOps& ops, const WaveField& psi) {
  return kinetic_from(ops.derivative_x(psi), ops.derivative_y(psi), ops.grid().delta);
}

double rotational_energy(const SpectralOps& ops, const WaveField& psi, double Omega) {
  return rotational_from(ops.grid(), psi, ops.derivative_x(psi), ops.derivative_y(psi), Omega);
}

double confinement_energy(const WaveField& psi1, const WaveField& psi2, double eps, double delta_c,
                          const ConfinementField& conf, double spacing) {
  return confinement_parts(psi1, psi2, eps, delta_c, conf.values, spacing).full;
}

EnergyEvaluation evaluate_energy(const CondensateState& st, bool withCentrifugal) {
  check_state(st);
  const Discretization& d = *st.disc;
  const SpectralOps& ops = *d.ops;
  EnergyEvaluation ev;
  EnergyReport& r = ev.report;
  double reduced = 0.0;
  for (int l = 0; l < 2; ++l) {
    if (is_zero(st.psi[l])) {
      ev.dx[l] = ev.dy[l] = ComplexField(d.grid.side());
      continue;
    }
    ev.dx[l] = ops.derivative_x(st.psi[l]);
    ev.dy[l] = ops.derivative_y(st.psi[l]);
    r.kinetic[l] = kinetic_from(ev.dx[l], ev.dy[l], d.grid.delta);
    r.rotational[l] = rotational_from(d.grid, st.psi[l], ev.dx[l], ev.dy[l], st.params.Omega);
    reduced += r.kinetic[l] + r.rotational[l];
  }
  const ConfinementParts c = confinement_parts(st.psi[0], st.psi[1], st.params.epsilon,
                                               st.params.delta, d.confinement.values, d.grid.delta);
  r.confinement = c.full;
  r.offset = c.offset;
  reduced += c.variable;
  if (withCentrifugal) {
    r.centrifugal = centrifugal_from(d, st, st.params.Omega);
    reduced += r.centrifugal;
  }
  r.reduced = reduced;
  // Forming the total from offset + reduced keeps it monotone in the reduced energy;
  // it equals the sum of the individual terms up to round-off.
  r.total = r.offset + r.reduced;
  return ev;
}

EnergyReport total_energy(const CondensateState& st, bool withCentrifugal) {
  return evaluate_energy(st, withCentrifugal).report;
}

GradientPack gradient(const CondensateState& st, bool withCentrifugal) {
  check_state(st);
  const SpectralOps& ops = *st.disc->ops;
  EnergyEvaluation partial;
  for (int l = 0; l < 2; ++l) {
    if (is_zero(st.psi[l])) {
      partial.dx[l] = partial.dy[l] = ComplexField(st.disc->grid.side());
      continue;
    }
    partial.dx[l] = ops.derivative_x(st.psi[l]);
    partial.dy[l] = ops.derivative_y(st.psi[l]);
  }
  return gradient(st, withCentrifugal, partial);
}

GradientPack gradient(const CondensateState& st, bool withCentrifugal,
                      const EnergyEvaluation& cached) {
  check_state(st);
  const Discretization& d = *st.disc;
  const Grid& g = d.grid;
  const SpectralOps& ops = *d.ops;
  const std::size_t N = static_cast<std::size_t>(g.N);
  const std::size_t s = g.side();
  const double d2 = g.delta * g.delta;
  const double eps2 = st.params.epsilon * st.params.epsilon;
  const double Omega = st.params.Omega;
  const double cent = withCentrifugal ? Omega * Omega * d2 : 0.0;
  const double one_minus_delta = 1.0 - st.params.delta;

  GradientPack out;
  for (int l = 0; l < 2; ++l) {
    if (is_zero(st.psi[l])) {
      out.dP[l] = RealMatrix(N);
      out.dQ[l] = RealMatrix(N);
      continue;
    }
    // The kinetic energy is (delta^2/2)(|D_x psi|^2 + |D_y psi|^2) summed over the whole
    // square, with ifft = fft^H/(N+1) so that D^H = -D. Its exact gradient is therefore
    // -delta^2 (D_x D_x + D_y D_y) psi.
    const ComplexField dxx = ops.filter(cached.dx[l], SpectralOps::Axis::X, ops.i_xi());
    const ComplexField dyy = ops.filter(cached.dy[l], SpectralOps::Axis::Y, ops.i_xi());
    const WaveField& psi = st.psi[l];
    const WaveField& other = st.psi[1 - l];
    const ComplexField& dx = cached.dx[l];
    const ComplexField& dy = cached.dy[l];
    RealMatrix dP(N), dQ(N);

#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t ni = 1; ni <= static_cast<std::ptrdiff_t>(N); ++ni) {
      const auto n = static_cast<std::size_t>(ni);
      for (std::size_t k = 1; k + 1 < s; ++k) {
        const complex kin = -d2 * (dxx(n, k) + dyy(n, k));
        // B = X*D_y psi - Y*D_x psi; rotation partials are -2 Omega d2 Im B and +2 Omega d2 Re B.
        const complex B = g.x[n] * dy(n, k) - g.y[k] * dx(n, k);
        const double dens = std::norm(psi(n, k)) + std::norm(other(n, k));
        const double pot = -(d2 / eps2) * (d.confinement.values(n, k) - dens +
                                           one_minus_delta * std::norm(other(n, k)));
        const double c = cent * d.r2(n, k);
        const double p = psi(n, k).real(), q = psi(n, k).imag();
        dP(n - 1, k - 1) = kin.real() - 2.0 * Omega * d2 * B.imag() + (pot + c) * p;
        dQ(n - 1, k - 1) = kin.imag() + 2.0 * Omega * d2 * B.real() + (pot + c) * q;
      }
    }
    out.dP[l] = std::move(dP);
    out.dQ[l] = std::move(dQ);
  }
  return out;
}

CriterionReport optimality_criterion(const CondensateState& st, const GradientPack& grad) {
  check_state(st);
  const Grid& g = st.grid();
  const std::size_t N = static_cast<std::size_t>(g.N);
  const double d2 = g.delta * g.delta;
  CriterionReport rep;
  for (int l = 0; l < 2; ++l) {
    RealMatrix KP(N), KQ(N);
    if (st.params.fraction(l) > 0.0) {
      const WaveField& psi = st.psi[l];
      const double norm2 = norm_delta_sq(psi, g.delta);
      if (!(norm2 > 0.0))
        throw CriterionError("optimality_criterion: component " + std::to_string(l + 1) +
                             " has zero mass but a positive mass fraction");
      const double proj = ordered_row_sum(0, N, [&](std::size_t i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < N; ++j)
          acc += grad.dP[l](i, j) * psi(i + 1, j + 1).real() +
                 grad.dQ[l](i, j) * psi(i + 1, j + 1).imag();
        return acc;
      });
      const double c = d2 / norm2 * proj;
      for (std::size_t i = 0; i < N; ++i) {
        for (std::size_t j = 0; j < N; ++j) {
          KP(i, j) = grad.dP[l](i, j) - c * psi(i + 1, j + 1).real();
          KQ(i, j) = grad.dQ[l](i, j) - c * psi(i + 1, j + 1).imag();
        }
      }
      const auto sumsq = [&](const RealMatrix& m) {
        return ordered_row_sum(0, N, [&](std::size_t i) {
          double acc = 0.0;
          for (std::size_t j = 0; j < N; ++j) acc += m(i, j) * m(i, j);
          return acc;
        });
      };
      rep.KDelta += g.delta * std::sqrt(sumsq(KP)) + g.delta * std::sqrt(sumsq(KQ));
    }
    rep.KP[l] = std::move(KP);
    rep.KQ[l] = std::move(KQ);
  }
  return rep;
}

}  // namespace gpe
