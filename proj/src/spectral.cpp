#include "pdwave/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "pdwave/error.hpp"

namespace pdwave {

namespace {
// FFTW's planner is not re-entrant.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

Fft::Fft(std::size_t n) : n_(n) {
  require(n >= 2, "transform length must be at least 2");
  std::lock_guard<std::mutex> lock(planner_mutex());
  real_ = fftw_alloc_real(n_);
  auto* spec = fftw_alloc_complex(spectrum_size());
  spectrum_ = spec;
  const int len = static_cast<int>(n_);
  plan_forward_ = fftw_plan_dft_r2c_1d(len, real_, spec, FFTW_ESTIMATE);
  plan_inverse_ = fftw_plan_dft_c2r_1d(len, spec, real_, FFTW_ESTIMATE);
}

Fft::~Fft() {
  std::lock_guard<std::mutex> lock(planner_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(plan_forward_));
  fftw_destroy_plan(static_cast<fftw_plan>(plan_inverse_));
  fftw_free(real_);
  fftw_free(spectrum_);
}

void Fft::forward(std::span<const double> in,
                  std::span<std::complex<double>> out) {
  std::copy(in.begin(), in.end(), real_);
  fftw_execute(static_cast<fftw_plan>(plan_forward_));
  auto* spec = static_cast<fftw_complex*>(spectrum_);
  for (std::size_t n = 0; n < spectrum_size(); ++n) {
    out[n] = {spec[n][0], spec[n][1]};
  }
}

void Fft::inverse(std::span<const std::complex<double>> in,
                  std::span<double> out) {
  auto* spec = static_cast<fftw_complex*>(spectrum_);
  for (std::size_t n = 0; n < spectrum_size(); ++n) {
    spec[n][0] = in[n].real();
    spec[n][1] = in[n].imag();
  }
  fftw_execute(static_cast<fftw_plan>(plan_inverse_));
  const double scale = 1.0 / static_cast<double>(n_);
  for (std::size_t j = 0; j < n_; ++j) out[j] = real_[j] * scale;
}

Fft& fft_for(std::size_t n) {
  thread_local std::map<std::size_t, std::unique_ptr<Fft>> cache;
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<Fft>(n);
  return *slot;
}

double sinc(double y) {
  if (std::abs(y) < 1e-4) return 1.0 - y * y / 6.0;
  return std::sin(y) / y;
}

double sinch(double y) {
  if (std::abs(y) < 1e-4) return 1.0 + y * y / 6.0;
  return std::sinh(y) / y;
}

double symbol_A(double xi, double k) {
  require(xi > 0.0, "bond length must be positive");
  return xi * sinc(0.5 * k * xi);
}

Profile conv_spectral(const Profile& w, double xi) {
  require(xi > 0.0, "bond length must be positive, got " + std::to_string(xi));
  const Grid& g = w.grid();
  Fft& fft = fft_for(g.size());
  std::vector<std::complex<double>> spec(fft.spectrum_size());
  fft.forward(w.values(), spec);
  for (std::size_t n = 0; n < spec.size(); ++n) {
    spec[n] *= symbol_A(xi, g.wavenumber(n));
  }
  Profile out(g);
  fft.inverse(spec, out.values());
  return out;
}

Profile conv_direct(const Profile& w, double xi) {
  const Grid& g = w.grid();
  require(xi > 0.0, "bond length must be positive, got " + std::to_string(xi));
  require(xi <= g.period(), "bond length " + std::to_string(xi) +
                                " exceeds the period " +
                                std::to_string(g.period()));
  const std::size_t n = g.size();
  const double h = g.spacing();
  const double x0 = g.node(0);

  // cumulative[i] = integral of the interpolant from x_0 to x_i
  std::vector<double> cumulative(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    cumulative[i + 1] = cumulative[i] + 0.5 * h * (w[i] + w[(i + 1) % n]);
  }
  const double total = cumulative[n];

  auto antiderivative = [&](double t) {
    const double u = (t - x0) / h;
    double cell = std::floor(u);
    double s = u - cell;
    auto wraps = static_cast<long>(std::floor(cell / static_cast<double>(n)));
    long i = static_cast<long>(cell) - wraps * static_cast<long>(n);
    if (i >= static_cast<long>(n)) {  // floor round-off
      i -= static_cast<long>(n);
      ++wraps;
    }
    const auto ui = static_cast<std::size_t>(i);
    const double a = w[ui];
    const double b = w[(ui + 1) % n];
    return static_cast<double>(wraps) * total + cumulative[ui] +
           h * (a * s + 0.5 * (b - a) * s * s);
  };

  Profile out(g);
  for (std::size_t j = 0; j < n; ++j) {
    const double x = g.node(j);
    out[j] = antiderivative(x + 0.5 * xi) - antiderivative(x - 0.5 * xi);
  }
  return out;
}

}  // namespace pdwave
