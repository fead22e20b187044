#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace gpe {

using complex = std::complex<double>;

/// Dense square matrix stored row-major; entry (n, k) has n along x and k along y.
template <class T>
class SquareMatrix {
 public:
  SquareMatrix() = default;
  explicit SquareMatrix(std::size_t side, T fill = T{})
      : side_(side), data_(side * side, fill) {}

  std::size_t side() const { return side_; }
  std::size_t size() const { return data_.size(); }

  T& operator()(std::size_t n, std::size_t k) { return data_[n * side_ + k]; }
  const T& operator()(std::size_t n, std::size_t k) const { return data_[n * side_ + k]; }

  T* data() { return data_.data(); }
  const T* data() const { return data_.data(); }
  std::span<T> values() { return data_; }
  std::span<const T> values() const { return data_; }

  bool operator==(const SquareMatrix&) const = default;

 private:
  std::size_t side_ = 0;
  std::vector<T> data_;
};

/// Complex (N+2)x(N+2) grid function, boundary rows/columns included.
using ComplexField = SquareMatrix<complex>;
/// One wave-function component. Solver-facing fields keep a zero boundary.
using WaveField = ComplexField;
/// Real N x N matrix over interior indices 1..N (stored at 0..N-1).
using RealMatrix = SquareMatrix<double>;

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline void require_same_side(std::size_t a, std::size_t b, const char* what) {
  if (a != b) throw DimensionError(std::string(what) + ": dimension mismatch");
}

/// Zero the outermost rows and columns.
void zero_boundary(ComplexField& f);
bool has_zero_boundary(const ComplexField& f);

}  // namespace gpe
