#include "gpe/spectral.hpp"

#include <fftw3.h>

#include <mutex>

namespace gpe {

namespace {

// The FFTW planner is not thread-safe; execution of an existing plan is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

inline double parity(std::size_t m) { return (m & 1u) ? -1.0 : 1.0; }

fftw_complex* as_fftw(complex* p) { return reinterpret_cast<fftw_complex*>(p); }

struct FftwBuffer {
  explicit FftwBuffer(std::size_t n)
      : ptr(static_cast<complex*>(fftw_malloc(sizeof(complex) * n))) {
    if (!ptr) throw std::bad_alloc();
  }
  ~FftwBuffer() { fftw_free(ptr); }
  FftwBuffer(const FftwBuffer&) = delete;
  FftwBuffer& operator=(const FftwBuffer&) = delete;
  complex* ptr;
};

}  // namespace

struct SpectralOps::Plans {
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
};

SpectralOps::SpectralOps(const Grid& grid) : grid_(grid), plans_(std::make_unique<Plans>()) {
  const std::size_t s = grid_.side();
  i_xi_.resize(s);
  xi_sq_.resize(s);
  for (std::size_t p = 0; p < s; ++p) {
    i_xi_[p] = complex{0.0, grid_.xi[p]};
    xi_sq_[p] = complex{grid_.xi[p] * grid_.xi[p], 0.0};
  }

  const int m = grid_.N + 1;
  FftwBuffer in(m), out(m);
  std::lock_guard lock(planner_mutex());
  plans_->forward = fftw_plan_dft_1d(m, as_fftw(in.ptr), as_fftw(out.ptr), FFTW_FORWARD,
                                     FFTW_ESTIMATE);
  plans_->backward = fftw_plan_dft_1d(m, as_fftw(in.ptr), as_fftw(out.ptr), FFTW_BACKWARD,
                                      FFTW_ESTIMATE);
  if (!plans_->forward || !plans_->backward) throw std::runtime_error("FFTW planning failed");
}

SpectralOps::~SpectralOps() {
  std::lock_guard lock(planner_mutex());
  if (plans_->forward) fftw_destroy_plan(plans_->forward);
  if (plans_->backward) fftw_destroy_plan(plans_->backward);
}

void SpectralOps::run_lines(const ComplexField& in, ComplexField& out, Axis axis, Op op,
                            std::span<const complex> multiplier, int passes) const {
  const std::size_t s = grid_.side();
  require_same_side(in.side(), s, "SpectralOps");
  const std::size_t m = s - 1;  // transform length N+1
  const double inv_m = 1.0 / static_cast<double>(m);
  const std::ptrdiff_t stride = axis == Axis::X ? static_cast<std::ptrdiff_t>(s) : 1;
  const std::ptrdiff_t line_step = axis == Axis::X ? 1 : static_cast<std::ptrdiff_t>(s);
  fftw_plan fwd = plans_->forward;
  fftw_plan bwd = plans_->backward;

#pragma omp parallel
  {
    FftwBuffer a(m), b(m);
    std::vector<complex> line(s), res(s);

    // fft of `line` into `res`, all N+2 outputs.
    auto forward = [&] {
      for (std::size_t j = 0; j < m; ++j) a.ptr[j] = parity(j) * line[j];
      const complex tail = parity(m) * line[m];
      fftw_execute_dft(fwd, as_fftw(a.ptr), as_fftw(b.ptr));
      for (std::size_t p = 0; p < m; ++p) res[p] = b.ptr[p] + tail;
      res[m] = res[0];
    };
    // ifft of `line` into `res`.
    auto inverse = [&] {
      for (std::size_t p = 0; p < m; ++p) a.ptr[p] = line[p];
      const complex tail = line[m];
      fftw_execute_dft(bwd, as_fftw(a.ptr), as_fftw(b.ptr));
      for (std::size_t n = 0; n < m; ++n) res[n] = parity(n) * inv_m * (b.ptr[n] + tail);
      res[m] = parity(m) * inv_m * (b.ptr[0] + tail);
    };

#pragma omp for schedule(static)
    for (std::ptrdiff_t l = 0; l < static_cast<std::ptrdiff_t>(s); ++l) {
      const complex* src = in.data() + l * line_step;
      for (std::size_t j = 0; j < s; ++j) line[j] = src[static_cast<std::ptrdiff_t>(j) * stride];

      switch (op) {
        case Op::Forward:
          forward();
          break;
        case Op::Inverse:
          inverse();
          break;
        case Op::Filter:
          for (int pass = 0; pass < passes; ++pass) {
            forward();
            for (std::size_t p = 0; p < s; ++p) line[p] = multiplier[p] * res[p];
            inverse();
            if (pass + 1 < passes) line.swap(res);
          }
          break;
      }

      complex* dst = out.data() + l * line_step;
      for (std::size_t j = 0; j < s; ++j) dst[static_cast<std::ptrdiff_t>(j) * stride] = res[j];
    }
  }
}

ComplexField SpectralOps::fft_x(const ComplexField& v) const {
  ComplexField out(grid_.side());
  run_lines(v, out, Axis::X, Op::Forward, {}, 0);
  return out;
}

ComplexField SpectralOps::ifft_x(const ComplexField& v) const {
  ComplexField out(grid_.side());
  run_lines(v, out, Axis::X, Op::Inverse, {}, 0);
  return out;
}

ComplexField SpectralOps::fft_y(const ComplexField& v) const {
  ComplexField out(grid_.side());
  run_lines(v, out, Axis::Y, Op::Forward, {}, 0);
  return out;
}

ComplexField SpectralOps::ifft_y(const ComplexField& v) const {
  ComplexField out(grid_.side());
  run_lines(v, out, Axis::Y, Op::Inverse, {}, 0);
  return out;
}

ComplexField SpectralOps::filter(const ComplexField& v, Axis axis,
                                 std::span<const complex> multiplier, int passes) const {
  if (multiplier.size() != grid_.side()) throw DimensionError("filter: multiplier size");
  ComplexField out(grid_.side());
  run_lines(v, out, axis, Op::Filter, multiplier, passes);
  return out;
}

ComplexField SpectralOps::derivative_x(const ComplexField& psi) const {
  return filter(psi, Axis::X, i_xi_);
}

ComplexField SpectralOps::derivative_y(const ComplexField& psi) const {
  return filter(psi, Axis::Y, i_xi_);
}

ComplexField SpectralOps::second_derivative_diag(const ComplexField& psi) const {
  ComplexField out = filter(psi, Axis::X, xi_sq_);
  const ComplexField along_y = filter(psi, Axis::Y, xi_sq_);
  for (std::size_t i = 0; i < out.size(); ++i) out.data()[i] += along_y.data()[i];
  return out;
}

}  // namespace gpe
