#include "pdwave/analysis.hpp"

#include <cmath>
#include <sstream>

#include "pdwave/error.hpp"
#include "pdwave/spectral.hpp"

namespace pdwave {

namespace {

constexpr double kSinchLimit = 700.0;

double linear_weight(const BondTerm& t) {
  return t.weight * t.scale * t.scale * t.phi.curvature_at_zero();
}

}  // namespace

double theta2(double k, const Coupling& c) {
  double s = 0.0;
  for (const auto& t : c.terms()) {
    const double y = sinc(0.5 * k * t.xi);
    s += linear_weight(t) * t.xi * t.xi * y * y;
  }
  return s;
}

double omega2(double k, const Coupling& c) { return k * k * theta2(k, c); }

double theta2_imag(double lambda, const Coupling& c) {
  require(lambda >= 0.0, "decay rate must be nonnegative");
  double s = 0.0;
  for (const auto& t : c.terms()) {
    const double arg = 0.5 * lambda * t.xi;
    if (arg > kSinchLimit) {
      std::ostringstream os;
      os << "sinch overflows for lambda = " << lambda << " and xi = " << t.xi;
      fail(ErrorCode::Overflow, os.str());
    }
    const double y = sinch(arg);
    s += linear_weight(t) * t.xi * t.xi * y * y;
  }
  return s;
}

double sound_speed2(const Coupling& c) { return theta2(0.0, c); }

double omega2_limit(const Coupling& c) {
  double s = 0.0;
  for (const auto& t : c.terms()) s += 2.0 * linear_weight(t);
  return s;
}

DispersionCurve dispersion_curve(const Coupling& c, double k_min, double k_max,
                                 std::size_t samples) {
  require(samples >= 2, "a dispersion curve needs at least two samples");
  require(k_max > k_min, "wavenumber range is empty");
  DispersionCurve d;
  d.k.reserve(samples);
  for (std::size_t i = 0; i < samples; ++i) {
    const double k = k_min + (k_max - k_min) * static_cast<double>(i) /
                                 static_cast<double>(samples - 1);
    d.k.push_back(k);
    d.theta2.push_back(theta2(k, c));
    d.omega2.push_back(omega2(k, c));
  }
  d.c0 = sound_speed2(c);
  d.c_inf = omega2_limit(c);
  return d;
}

double decay_rate(double sigma2, const Coupling& c) {
  const double c0 = sound_speed2(c);
  if (!(sigma2 > c0)) {
    std::ostringstream os;
    os << "sigma^2 = " << sigma2 << " is not above Theta^2(0) = " << c0
       << "; no exponentially decaying tail";
    fail(ErrorCode::Subsonic, os.str());
  }
  double lo = 0.0;
  double hi = 1.0;
  while (theta2_imag(hi, c) < sigma2) {
    lo = hi;
    hi *= 2.0;
  }
  for (int i = 0; i < 200 && hi - lo > 1e-15 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (theta2_imag(mid, c) < sigma2 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

DecayFit fit_decay(const Profile& w, double x_low, double x_high) {
  require(x_high > x_low, "fit window is empty");
  const Grid& g = w.grid();
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  std::size_t n = 0;
  for (std::size_t j = 0; j < g.size(); ++j) {
    const double x = g.node(j);
    if (x < x_low || x > x_high) continue;
    if (!(w[j] > 0.0)) {
      std::ostringstream os;
      os << "profile is not positive at x = " << x << " inside the fit window";
      fail(ErrorCode::InvalidArgument, os.str());
    }
    const double y = std::log(w[j]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  require(n >= 2, "fit window holds fewer than two nodes");
  const double dn = static_cast<double>(n);
  const double slope = (dn * sxy - sx * sy) / (dn * sxx - sx * sx);
  DecayFit f;
  f.lambda = std::abs(x_low) <= std::abs(x_high) ? -slope : slope;
  f.intercept = (sy - slope * sx) / dn;
  f.samples = n;
  f.x_low = x_low;
  f.x_high = x_high;
  return f;
}

std::pair<double, double> tail_window(const Profile& w, double upper,
                                      double lower) {
  require(upper > lower && lower > 0.0, "tail window fractions must satisfy 0 < lower < upper");
  const Grid& g = w.grid();
  const double peak = w.max();
  require(peak > 0.0, "profile has no positive peak");
  double x_low = -1.0;
  double x_high = -1.0;
  for (std::size_t j = g.center(); j < g.size(); ++j) {
    const double x = g.node(j);
    if (x > 0.5 * g.half_length()) break;
    const double r = w[j] / peak;
    if (r <= upper && x_low < 0.0) x_low = x;
    if (r >= lower) x_high = x;
  }
  if (x_low < 0.0 || x_high <= x_low) {
    fail(ErrorCode::InvalidArgument, "profile has no resolvable exponential tail on [0, L/2]");
  }
  return {x_low, x_high};
}

KdvCoefficients kdv_coefficients(const Coupling& c) {
  KdvCoefficients k;
  double quartic = 0.0;
  for (const auto& t : c.terms()) {
    const double x2 = t.xi * t.xi;
    k.c0 += linear_weight(t) * x2;
    quartic += linear_weight(t) * x2 * x2;
    k.c2 += 0.5 * t.phi.third_at_zero() * t.weight * t.scale * t.scale *
            t.scale * x2 * t.xi;
  }
  k.c1_moment = 0.5 * quartic;
  k.c1_symbol = quartic / 12.0;
  if (!(k.c2 > 0.0) || !std::isfinite(k.c2)) {
    std::ostringstream os;
    os << "KdV limit is degenerate: c2 = " << k.c2 << " (needs Phi'''(0) > 0)";
    fail(ErrorCode::Degenerate, os.str());
  }
  if (!(k.c1_symbol > 0.0) || !std::isfinite(k.c1_symbol)) {
    fail(ErrorCode::Degenerate, "KdV dispersion coefficient is not positive and finite");
  }
  return k;
}

KdvPrediction kdv_profile(double eps, const Coupling& c, const Grid& grid,
                          KdvConstant which) {
  require(eps > 0.0, "KdV scaling parameter must be positive");
  const KdvCoefficients k = kdv_coefficients(c);
  const double c1 = which == KdvConstant::Symbol ? k.c1_symbol : k.c1_moment;
  const double peak = eps * eps * 1.5 / k.c2;
  const double rate = eps / (2.0 * std::sqrt(c1));
  Profile p = Profile::from_function(grid, [&](double x) {
    const double s = 1.0 / std::cosh(rate * x);
    return peak * s * s;
  });
  return {eps, c1, k.c2, k.c0 + eps * eps, peak, std::move(p)};
}

KdvComparison kdv_compare(const WaveSolution& sol, const Coupling& c,
                          KdvConstant which) {
  const Coupling cc = sol.sign == ConeSign::Reflected ? c.reflected() : c;
  const double c0 = sound_speed2(cc);
  // sigma^2 within round-off of the sound speed counts as sonic
  if (!(sol.sigma2 > c0 * (1.0 + 1e-9))) {
    std::ostringstream os;
    os << "solution is not supersonic: sigma^2 = " << sol.sigma2
       << ", Theta^2(0) = " << c0;
    fail(ErrorCode::Subsonic, os.str());
  }
  KdvComparison r;
  r.eps = std::sqrt(sol.sigma2 - c0);
  r.sigma2 = sol.sigma2;
  const KdvPrediction pred = kdv_profile(r.eps, cc, sol.profile.grid(), which);
  r.sigma2_predicted = pred.sigma2;
  const Profile w = sol.cone_profile();
  const Profile diff = w - pred.profile;
  r.sup_error = std::max(diff.max(), -diff.min()) / pred.peak;
  r.l2_error = l2_norm(diff) / l2_norm(pred.profile);
  r.amplitude_ratio = w.max() / pred.peak;
  return r;
}

}  // namespace pdwave
