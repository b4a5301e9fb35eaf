#pragma once

#include <vector>

#include "pdwave/grid.hpp"
#include "pdwave/material.hpp"
#include "pdwave/solver.hpp"

namespace pdwave {

/// Theta^2(k): sum of weight * scale^2 * Phi''(0) * xi^2 * sinc^2(k xi / 2).
double theta2(double k, const Coupling& c);
/// Omega^2(k) = k^2 Theta^2(k).
double omega2(double k, const Coupling& c);
/// Theta^2(i lambda), with sinch in place of sinc. Throws Overflow when
/// lambda * xi / 2 leaves the double range.
double theta2_imag(double lambda, const Coupling& c);

/// c_0 = Theta^2(0), the squared sound speed.
double sound_speed2(const Coupling& c);
/// lim Omega^2 for |k| -> inf (mean over a period for discrete couplings).
double omega2_limit(const Coupling& c);

struct DispersionCurve {
  std::vector<double> k;
  std::vector<double> theta2;
  std::vector<double> omega2;
  double c0 = 0.0;
  double c_inf = 0.0;
};

DispersionCurve dispersion_curve(const Coupling& c, double k_min, double k_max,
                                 std::size_t samples);

/// Unique lambda > 0 with Theta^2(i lambda) = sigma2. Throws Subsonic when
/// sigma2 <= Theta^2(0).
double decay_rate(double sigma2, const Coupling& c);

struct DecayFit {
  double lambda = 0.0;
  double intercept = 0.0;  // log W extrapolated to x = 0
  std::size_t samples = 0;
  double x_low = 0.0;
  double x_high = 0.0;
};

/// Least-squares slope of -log W(x) over nodes with x in [x_low, x_high].
DecayFit fit_decay(const Profile& w, double x_low, double x_high);

/// Tail window on x > 0 where W / max W lies in [lower, upper]; the part
/// beyond L/2 is dropped because periodic images dominate there.
std::pair<double, double> tail_window(const Profile& w, double upper = 1e-3,
                                      double lower = 1e-9);

struct KdvCoefficients {
  double c0 = 0.0;
  double c1_moment = 0.0;  // 1/2 sum xi^4 alpha beta^2 Phi''(0)
  double c1_symbol = 0.0;  // 1/12 of the same sum, from the sinc^2 expansion
  double c2 = 0.0;         // sum 1/2 Phi'''(0) xi^3 alpha beta^3
};

/// Throws Degenerate if Phi'''(0) <= 0 (no small-amplitude KdV limit).
KdvCoefficients kdv_coefficients(const Coupling& c);

enum class KdvConstant { Symbol, Moment };

struct KdvPrediction {
  double eps = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
  double sigma2 = 0.0;  // Theta^2(0) + eps^2
  double peak = 0.0;
  Profile profile;
};

/// eps^2 (3 / (2 c2)) sech^2(eps x / (2 sqrt(c1))) on the grid.
KdvPrediction kdv_profile(double eps, const Coupling& c, const Grid& grid,
                          KdvConstant which = KdvConstant::Symbol);

struct KdvComparison {
  double eps = 0.0;
  double sigma2 = 0.0;
  double sigma2_predicted = 0.0;
  double sup_error = 0.0;  // relative to the predicted peak
  double l2_error = 0.0;   // relative to the predicted L2 norm
  double amplitude_ratio = 0.0;
};

/// Compares a converged supersonic wave with the KdV profile at
/// eps = sqrt(sigma^2 - Theta^2(0)). Reflected solutions are compared in the
/// positive cone against the reflected coupling.
KdvComparison kdv_compare(const WaveSolution& sol, const Coupling& c,
                          KdvConstant which = KdvConstant::Symbol);

}  // namespace pdwave
