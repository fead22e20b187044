#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "gpe/energy.hpp"

/// Serial implementations that evaluate the defining sums term by term.
/// They are O(N) per output entry and exist to check the fast kernels.
namespace gpe::reference {

ComplexField fft_x(const Grid& g, const ComplexField& v);
ComplexField ifft_x(const Grid& g, const ComplexField& v);
ComplexField fft_y(const Grid& g, const ComplexField& v);
ComplexField ifft_y(const Grid& g, const ComplexField& v);

ComplexField derivative_x(const Grid& g, const ComplexField& psi);
ComplexField derivative_y(const Grid& g, const ComplexField& psi);
ComplexField second_derivative_diag(const Grid& g, const ComplexField& psi);

double kinetic_energy(const Grid& g, const WaveField& psi);
double rotational_energy(const Grid& g, const WaveField& psi, double Omega);
/// Literal confinement sum, offset included.
double confinement_energy(const Grid& g, const WaveField& psi1, const WaveField& psi2,
                          double eps, double delta_c, const SquareMatrix<double>& rho);
double centrifugal_energy(const Grid& g, const WaveField& psi1, const WaveField& psi2,
                          double Omega);

/// Sum of the literal terms, with the centrifugal term when requested.
double total_energy(const CondensateState& st, bool withCentrifugal);

/// Uniform entries in [-1, 1] + i[-1, 1]; boundary zeroed when `dirichlet`.
ComplexField random_field(std::size_t side, std::mt19937_64& rng, bool dirichlet);

/// Largest absolute difference between the fast kernels and the literal sums.
struct OracleReport {
  int N = 0;
  int fields = 0;
  double transforms = 0.0;  ///< fft_x, ifft_x, fft_y, ifft_y
  double derivatives = 0.0;  ///< derivative_x, derivative_y
  double secondDerivative = 0.0;
  double worst() const;
};

/// Compares SpectralOps with the literal sums on random fields over [-7, 7]^2.
std::vector<OracleReport> spectral_oracle(std::span<const int> sizes, int fieldsPerSize,
                                          std::uint64_t seed, bool dirichlet = true);

}  // namespace gpe::reference
