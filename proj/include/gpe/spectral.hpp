#pragma once

#include <memory>
#include <span>
#include <vector>

#include "gpe/field.hpp"
#include "gpe/grid.hpp"

namespace gpe {

/// Shifted discrete Fourier transforms on the (N+2)-point grid.
///
/// Along x, for every column k:
///   fft_x(v)[p,k]  = sum_{m=0}^{N+1} v[m,k] e^{i pi m} e^{-2 pi i m p/(N+1)}
///   ifft_x(v)[n,k] = e^{-i pi n}/(N+1) sum_{p=0}^{N+1} v[p,k] e^{2 pi i n p/(N+1)}
/// and symmetrically along y. The kernel has period N+1 over N+2 samples, so
/// index N+1 aliases index 0 and ifft_x(fft_x(v)) != v in general.
///
/// Every line is evaluated with one length-(N+1) FFT plus explicit corrections
/// for the aliased sample; lines run in parallel and each line's arithmetic is
/// independent of the thread count.
class SpectralOps {
 public:
  enum class Axis { X, Y };

  explicit SpectralOps(const Grid& grid);
  ~SpectralOps();
  SpectralOps(const SpectralOps&) = delete;
  SpectralOps& operator=(const SpectralOps&) = delete;

  const Grid& grid() const { return grid_; }

  ComplexField fft_x(const ComplexField& v) const;
  ComplexField ifft_x(const ComplexField& v) const;
  ComplexField fft_y(const ComplexField& v) const;
  ComplexField ifft_y(const ComplexField& v) const;

  /// ifft_x(i Xi * fft_x(psi))
  ComplexField derivative_x(const ComplexField& psi) const;
  /// ifft_y(i Lambda * fft_y(psi))
  ComplexField derivative_y(const ComplexField& psi) const;
  /// ifft_x(Xi^2 * fft_x(psi)) + ifft_y(Lambda^2 * fft_y(psi))
  ComplexField second_derivative_diag(const ComplexField& psi) const;

  /// (ifft . diag(multiplier) . fft)^passes along one axis, fused per line.
  /// `multiplier` has N+2 entries indexed by frequency p.
  ComplexField filter(const ComplexField& v, Axis axis, std::span<const complex> multiplier,
                      int passes = 1) const;

  std::span<const complex> i_xi() const { return i_xi_; }
  std::span<const complex> xi_squared() const { return xi_sq_; }

 private:
  enum class Op { Forward, Inverse, Filter };
  void run_lines(const ComplexField& in, ComplexField& out, Axis axis, Op op,
                 std::span<const complex> multiplier, int passes) const;

  Grid grid_;
  std::vector<complex> i_xi_;
  std::vector<complex> xi_sq_;
  struct Plans;
  std::unique_ptr<Plans> plans_;
};

}  // namespace gpe
