#include "gpe/reference.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace gpe::reference {

namespace {

// e^{sign 2 pi i j/(N+1)} with j reduced mod N+1 first so large products stay exact.
complex root(std::size_t j, std::size_t period, double sign) {
  const double a = sign * 2.0 * std::numbers::pi * static_cast<double>(j % period) /
                   static_cast<double>(period);
  return {std::cos(a), std::sin(a)};
}

double parity(std::size_t m) { return (m & 1u) ? -1.0 : 1.0; }

enum class Axis { X, Y };

ComplexField forward(const Grid& g, const ComplexField& v, Axis axis) {
  require_same_side(v.side(), g.side(), "reference fft");
  const std::size_t s = g.side(), period = s - 1;
  ComplexField out(s);
  for (std::size_t line = 0; line < s; ++line)
    for (std::size_t p = 0; p < s; ++p) {
      complex acc = 0.0;
      for (std::size_t m = 0; m < s; ++m) {
        const complex vm = axis == Axis::X ? v(m, line) : v(line, m);
        acc += vm * parity(m) * root(m * p, period, -1.0);
      }
      (axis == Axis::X ? out(p, line) : out(line, p)) = acc;
    }
  return out;
}

ComplexField inverse(const Grid& g, const ComplexField& v, Axis axis) {
  require_same_side(v.side(), g.side(), "reference ifft");
  const std::size_t s = g.side(), period = s - 1;
  ComplexField out(s);
  for (std::size_t line = 0; line < s; ++line)
    for (std::size_t n = 0; n < s; ++n) {
      complex acc = 0.0;
      for (std::size_t p = 0; p < s; ++p) {
        const complex vp = axis == Axis::X ? v(p, line) : v(line, p);
        acc += vp * root(n * p, period, 1.0);
      }
      (axis == Axis::X ? out(n, line) : out(line, n)) =
          parity(n) * acc / static_cast<double>(period);
    }
  return out;
}

ComplexField multiply(const ComplexField& v, const std::vector<double>& freq, Axis axis,
                      complex scale, int power) {
  ComplexField out = v;
  const std::size_t s = v.side();
  for (std::size_t n = 0; n < s; ++n)
    for (std::size_t k = 0; k < s; ++k) {
      const double f = axis == Axis::X ? freq[n] : freq[k];
      out(n, k) *= scale * std::pow(f, power);
    }
  return out;
}

}  // namespace

ComplexField fft_x(const Grid& g, const ComplexField& v) { return forward(g, v, Axis::X); }
ComplexField ifft_x(const Grid& g, const ComplexField& v) { return inverse(g, v, Axis::X); }
ComplexField fft_y(const Grid& g, const ComplexField& v) { return forward(g, v, Axis::Y); }
ComplexField ifft_y(const Grid& g, const ComplexField& v) { return inverse(g, v, Axis::Y); }

ComplexField derivative_x(const Grid& g, const ComplexField& psi) {
  return ifft_x(g, multiply(fft_x(g, psi), g.xi, Axis::X, {0.0, 1.0}, 1));
}

ComplexField derivative_y(const Grid& g, const ComplexField& psi) {
  return ifft_y(g, multiply(fft_y(g, psi), g.lambda, Axis::Y, {0.0, 1.0}, 1));
}

ComplexField second_derivative_diag(const Grid& g, const ComplexField& psi) {
  ComplexField a = ifft_x(g, multiply(fft_x(g, psi), g.xi, Axis::X, 1.0, 2));
  const ComplexField b = ifft_y(g, multiply(fft_y(g, psi), g.lambda, Axis::Y, 1.0, 2));
  for (std::size_t i = 0; i < a.size(); ++i) a.data()[i] += b.data()[i];
  return a;
}

double kinetic_energy(const Grid& g, const WaveField& psi) {
  const ComplexField dx = derivative_x(g, psi), dy = derivative_y(g, psi);
  double sum = 0.0;
  for (std::size_t i = 0; i < dx.size(); ++i)
    sum += std::norm(dx.data()[i]) + std::norm(dy.data()[i]);
  return 0.5 * g.delta * g.delta * sum;
}

double rotational_energy(const Grid& g, const WaveField& psi, double Omega) {
  const ComplexField dx = derivative_x(g, psi), dy = derivative_y(g, psi);
  const std::size_t s = g.side();
  double sum = 0.0;
  for (std::size_t n = 0; n < s; ++n)
    for (std::size_t k = 0; k < s; ++k) {
      const complex a = -g.y[k] * dx(n, k) + g.x[n] * dy(n, k);
      sum += (complex{0.0, -1.0} * std::conj(psi(n, k)) * a).real();
    }
  return -Omega * g.delta * g.delta * sum;
}

double confinement_energy(const Grid& g, const WaveField& psi1, const WaveField& psi2,
                          double eps, double delta_c, const SquareMatrix<double>& rho) {
  double quad = 0.0, cross = 0.0;
  for (std::size_t i = 0; i < psi1.size(); ++i) {
    const double a = std::norm(psi1.data()[i]), b = std::norm(psi2.data()[i]);
    const double r = rho.data()[i] - a - b;
    quad += r * r;
    cross += a * b;
  }
  const double d2 = g.delta * g.delta;
  return d2 / (4.0 * eps * eps) * quad + d2 * (delta_c - 1.0) / (2.0 * eps * eps) * cross;
}

double centrifugal_energy(const Grid& g, const WaveField& psi1, const WaveField& psi2,
                          double Omega) {
  const std::size_t s = g.side();
  double sum = 0.0;
  for (std::size_t n = 0; n < s; ++n)
    for (std::size_t k = 0; k < s; ++k)
      sum += (g.x[n] * g.x[n] + g.y[k] * g.y[k]) *
             (std::norm(psi1(n, k)) + std::norm(psi2(n, k)));
  return 0.5 * Omega * Omega * g.delta * g.delta * sum;
}

double total_energy(const CondensateState& st, bool withCentrifugal) {
  const Grid& g = st.grid();
  double e = 0.0;
  for (int l = 0; l < 2; ++l)
    e += kinetic_energy(g, st.psi[l]) + rotational_energy(g, st.psi[l], st.params.Omega);
  e += confinement_energy(g, st.psi[0], st.psi[1], st.params.epsilon, st.params.delta,
                          st.disc->confinement.values);
  if (withCentrifugal) e += centrifugal_energy(g, st.psi[0], st.psi[1], st.params.Omega);
  return e;
}

ComplexField random_field(std::size_t side, std::mt19937_64& rng, bool dirichlet) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  ComplexField f(side);
  for (complex& v : f.values()) {
    const double re = u(rng);
    v = {re, u(rng)};
  }
  if (dirichlet) zero_boundary(f);
  return f;
}

double OracleReport::worst() const {
  return std::max({transforms, derivatives, secondDerivative});
}

namespace {
double max_abs_diff(const ComplexField& a, const ComplexField& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
  return m;
}
}  // namespace

std::vector<OracleReport> spectral_oracle(std::span<const int> sizes, int fieldsPerSize,
                                          std::uint64_t seed, bool dirichlet) {
  std::mt19937_64 rng(seed);
  std::vector<OracleReport> out;
  for (int N : sizes) {
    const Grid g = build_grid(7.0, 4.0, N);
    const SpectralOps ops(g);
    OracleReport r;
    r.N = N;
    r.fields = fieldsPerSize;
    for (int i = 0; i < fieldsPerSize; ++i) {
      const ComplexField v = random_field(g.side(), rng, dirichlet);
      r.transforms = std::max({r.transforms, max_abs_diff(ops.fft_x(v), fft_x(g, v)),
                               max_abs_diff(ops.ifft_x(v), ifft_x(g, v)),
                               max_abs_diff(ops.fft_y(v), fft_y(g, v)),
                               max_abs_diff(ops.ifft_y(v), ifft_y(g, v))});
      r.derivatives = std::max({r.derivatives, max_abs_diff(ops.derivative_x(v), derivative_x(g, v)),
                                max_abs_diff(ops.derivative_y(v), derivative_y(g, v))});
      r.secondDerivative = std::max(
          r.secondDerivative, max_abs_diff(ops.second_derivative_diag(v), second_derivative_diag(g, v)));
    }
    out.push_back(r);
  }
  return out;
}

}  // namespace gpe::reference
