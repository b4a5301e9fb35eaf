#pragma once

#include <complex>
#include <cstddef>
#include <span>

#include "pdwave/grid.hpp"

namespace pdwave {

/// Real-to-complex transform pair of a fixed length, backed by FFTW.
///
/// forward() yields N/2+1 coefficients; inverse() includes the 1/N factor so
/// that inverse(forward(x)) == x. Instances are cached per thread, see
/// fft_for().
class Fft {
 public:
  explicit Fft(std::size_t n);
  ~Fft();
  Fft(const Fft&) = delete;
  Fft& operator=(const Fft&) = delete;

  std::size_t size() const noexcept { return n_; }
  std::size_t spectrum_size() const noexcept { return n_ / 2 + 1; }

  void forward(std::span<const double> in, std::span<std::complex<double>> out);
  void inverse(std::span<const std::complex<double>> in, std::span<double> out);

 private:
  std::size_t n_;
  double* real_;
  void* spectrum_;
  void* plan_forward_;
  void* plan_inverse_;
};

Fft& fft_for(std::size_t n);

/// sin(y)/y with sinc(0) = 1.
double sinc(double y);
/// sinh(y)/y with sinch(0) = 1; series for |y| < 1e-4.
double sinch(double y);

/// Fourier symbol xi * sinc(k xi / 2) of the averaging operator.
double symbol_A(double xi, double k);

/// Averaging convolution (A_xi W)(x) = integral of W over [x - xi/2, x + xi/2],
/// applied mode-wise in Fourier space.
Profile conv_spectral(const Profile& w, double xi);

/// Same operator by composite trapezoidal quadrature of the periodic
/// piecewise-linear interpolant of W. Requires xi <= 2L.
Profile conv_direct(const Profile& w, double xi);

}  // namespace pdwave
